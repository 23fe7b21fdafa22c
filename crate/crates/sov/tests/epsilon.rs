use sov::epsilon::{default_test_functions, epsilon_study, smeared_pairing, TestFunction, EPSILON_SEQUENCE};
use sov::{build_gamma, ChainSpec, Impurity, Kind, Spin};

fn chain() -> ChainSpec {
    ChainSpec {
        n: 2,
        spins: vec![Spin { n2: 0, rho: 0.15 }, Spin { n2: 2, rho: -0.25 }],
        impurities: vec![Impurity { re: 0.2, im: 0.0 }, Impurity { re: -0.1, im: 0.0 }],
        epsilon: 0.0,
    }
}

#[test]
fn bump_support() {
    let t = TestFunction {
        n2: 0,
        center: 0.5,
        radius: 0.25,
        weight: 2.0,
    };
    assert_eq!(t.eval(0.5), 2.0);
    assert_eq!(t.eval(0.75), 0.0);
    assert_eq!(t.eval(0.2), 0.0);
    assert!(t.eval(0.6) > 0.0 && t.eval(0.6) < 2.0);
}

#[test]
fn cauchy_differences_shrink() {
    let g = build_gamma(&chain(), Kind::B).unwrap();
    let s = epsilon_study(&g, &default_test_functions(), &EPSILON_SEQUENCE, 1e-6).unwrap();
    assert_eq!(s.cauchy.len(), 3);
    assert!(s.is_monotone(), "{:?}", s.cauchy);
}

#[test]
fn rejects_bad_input() {
    let g = build_gamma(&chain(), Kind::B).unwrap();
    assert!(smeared_pairing(&g, &default_test_functions(), 0.0, 1e-6).is_err());
    let g3 = build_gamma(&ChainSpec::homogeneous(3, 0, 0.1), Kind::B).unwrap();
    assert!(smeared_pairing(&g3, &default_test_functions(), 0.1, 1e-6).is_err());
}
