use cfield::c64;
use gustafson::{
    gustafson_first, gustafson_first_rhs, gustafson_second, gustafson_second_rhs, j_omega_check, GustafsonError, MBPair,
    MBParams, MBSpec, SpectralPoint,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(n2: i32, re: f64, im: f64) -> MBPair {
    MBPair::new(n2, c64(re, im))
}

fn spec(n_max: usize) -> MBSpec {
    MBSpec {
        n_max,
        ..MBSpec::default()
    }
}

fn random_params(rng: &mut ChaCha8Rng, count: usize, sigma: u8, re: (f64, f64)) -> MBParams {
    let mut draw = || {
        let n2 = 2 * rng.gen_range(-1..=1) + sigma as i32;
        p(n2, rng.gen_range(re.0..re.1), rng.gen_range(-0.5..0.5))
    };
    MBParams {
        z_list: (0..count).map(|_| draw()).collect(),
        w_list: (0..count).map(|_| draw()).collect(),
    }
}

#[test]
fn first_n1_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for sigma in [0, 0, 1, 1] {
        let params = random_params(&mut rng, 2, sigma, (0.03, 0.2));
        let r = gustafson_first(1, &params, &MBSpec { sigma, ..spec(40) }).unwrap();
        assert!(r.rel_err() < 1e-6, "{params:?}: {} vs {} ({:e})", r.lhs.value, r.rhs, r.rel_err());
    }
}

#[test]
fn first_n1_symmetric_real_parameters() {
    let params = MBParams {
        z_list: vec![p(0, 0.2, 0.0); 2],
        w_list: vec![p(0, 0.2, 0.0); 2],
    };
    let r = gustafson_first(1, &params, &spec(40)).unwrap();
    assert!(r.rel_err() < 1e-6, "{} vs {} ({:e})", r.lhs.value, r.rhs, r.rel_err());
    assert!(r.lhs.value.im.abs() < 1e-12 * r.rhs.norm());
}

#[test]
fn first_n2_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for sigma in [0, 1] {
        let params = random_params(&mut rng, 3, sigma, (0.02, 0.12));
        let r = gustafson_first(2, &params, &MBSpec { sigma, ..spec(30) }).unwrap();
        assert!(r.rel_err() < 1e-4, "{params:?}: {} vs {} ({:e})", r.lhs.value, r.rhs, r.rel_err());
    }
}

#[test]
fn second_n1_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let zetas = [c64(1.0, 0.0), Complex64::from_polar(1.0, 2.0), c64(0.4, 0.3), c64(-1.2, 0.9)];
    for (k, zeta) in zetas.into_iter().enumerate() {
        let sigma = (k % 2) as u8;
        let params = random_params(&mut rng, 1, sigma, (0.02, 0.12));
        let r = gustafson_second(1, &params, zeta, &MBSpec { sigma, ..spec(40) }).unwrap();
        assert!(r.rel_err() < 1e-6, "ζ = {zeta}: {} vs {} ({:e})", r.lhs.value, r.rhs, r.rel_err());
    }
}

#[test]
fn second_rhs_at_unit_zeta() {
    // [1]^Z = 1 and [2]^{Z+W} = 2^{z+w+z̄+w̄}
    let params = MBParams {
        z_list: vec![p(2, 0.1, 0.3)],
        w_list: vec![p(0, 0.05, -0.2)],
    };
    let s = params.z_list[0] + params.w_list[0];
    let direct = c64(2.0, 0.0).powc(-(s.z() + s.zbar()))
        * cfield::cgamma(&cfield::FieldExponent::new(s.z(), s.zbar()).unwrap()).value;
    let rhs = gustafson_second_rhs(&params, c64(1.0, 0.0)).unwrap();
    assert!((rhs - direct).norm() < 1e-14 * direct.norm());
}

#[test]
fn second_n2_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for zeta in [c64(1.0, 0.0), c64(0.5, 0.4), c64(1.6, -0.8)] {
        let params = random_params(&mut rng, 2, 0, (0.02, 0.1));
        let r = gustafson_second(2, &params, zeta, &spec(40)).unwrap();
        assert!(r.rel_err() < 1e-4, "ζ = {zeta}: {} vs {} ({:e})", r.lhs.value, r.rhs, r.rel_err());
    }
}

#[test]
fn first_is_permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = random_params(&mut rng, 3, 0, (0.02, 0.12));
    let base = gustafson_first(2, &params, &spec(20)).unwrap().lhs.value;
    let mut swapped = params.clone();
    swapped.z_list.rotate_left(1);
    swapped.w_list.swap(0, 2);
    let other = gustafson_first(2, &swapped, &spec(20)).unwrap().lhs.value;
    assert!((base - other).norm() < 1e-9 * base.norm(), "{base} {other}");
}

#[test]
fn conjugation_closed_parameters_give_real_values() {
    // (n, x) ↦ (−n, x̄) maps each list to itself
    let params = MBParams {
        z_list: vec![p(2, 0.1, 0.3), p(-2, 0.1, -0.3)],
        w_list: vec![p(0, 0.15, 0.0), p(0, 0.05, 0.0)],
    };
    let r = gustafson_first(1, &params, &spec(30)).unwrap();
    assert!(r.lhs.value.im.abs() < 1e-8 * r.lhs.value.norm(), "{}", r.lhs.value);
    assert!(r.rhs.im.abs() < 1e-12 * r.rhs.norm());
    let params = MBParams {
        z_list: vec![p(2, 0.05, 0.3), p(-2, 0.05, -0.3), p(0, 0.1, 0.0)],
        w_list: vec![p(0, 0.06, 0.4), p(0, 0.06, -0.4), p(0, 0.02, 0.0)],
    };
    let r = gustafson_first(2, &params, &spec(20)).unwrap();
    assert!(r.lhs.value.im.abs() < 1e-8 * r.lhs.value.norm(), "{}", r.lhs.value);
}

#[test]
fn contour_is_shifted_when_poles_cross_zero() {
    let params = MBParams {
        z_list: vec![p(0, -0.1, 0.2), p(0, 0.2, -0.1)],
        w_list: vec![p(0, 0.25, 0.0), p(0, 0.3, 0.3)],
    };
    let r = gustafson_first(1, &params, &spec(40)).unwrap();
    assert!((r.contour_shifts[0] + 0.175).abs() < 1e-12, "{:?}", r.contour_shifts);
    assert!(r.rel_err() < 1e-6, "{:e}", r.rel_err());
    let fixed = gustafson_first(1, &params, &MBSpec { contour_shifts: vec![-0.15], ..spec(40) }).unwrap();
    assert!((fixed.lhs.value - r.lhs.value).norm() < 1e-6 * r.rhs.norm());
}

#[test]
fn rejects_bad_input() {
    let good = MBParams {
        z_list: vec![p(0, 0.1, 0.0), p(0, 0.1, 0.2)],
        w_list: vec![p(0, 0.1, 0.0), p(0, 0.1, 0.0)],
    };
    let err = |params: &MBParams, s: &MBSpec| gustafson_first(1, params, s).unwrap_err();
    assert!(matches!(
        err(&good, &MBSpec { contour_shifts: vec![0.1], ..spec(5) }),
        GustafsonError::PoleOnContour { .. }
    ));
    assert!(matches!(
        err(&good, &MBSpec { contour_shifts: vec![0.3], ..spec(5) }),
        GustafsonError::ContoursDoNotSeparate(_)
    ));
    let crossed = MBParams {
        z_list: vec![p(0, -0.3, 0.0), p(0, 0.1, 0.0)],
        w_list: vec![p(0, 0.1, 0.0), p(0, 0.1, 0.0)],
    };
    assert!(matches!(err(&crossed, &spec(5)), GustafsonError::ContoursDoNotSeparate(_)));
    assert!(matches!(err(&good, &MBSpec { sigma: 1, ..spec(5) }), GustafsonError::ParityMismatch { .. }));
    let divergent = MBParams {
        z_list: vec![p(0, 0.3, 0.0); 2],
        w_list: vec![p(0, 0.3, 0.0); 2],
    };
    assert!(matches!(err(&divergent, &spec(5)), GustafsonError::ConvergenceDomainViolated(_)));
    assert!(matches!(gustafson_first(3, &good, &spec(5)), Err(GustafsonError::Unsupported(_))));
    assert!(matches!(gustafson_first(2, &good, &spec(5)), Err(GustafsonError::InvalidSpec(_))));
    assert!(matches!(err(&good, &MBSpec { n_max: 0, ..spec(5) }), GustafsonError::InvalidSpec(_)));
    let one = MBParams {
        z_list: vec![p(0, 0.1, 0.0)],
        w_list: vec![p(0, 0.1, 0.0)],
    };
    assert!(matches!(
        gustafson_second(1, &one, c64(-2.0, 0.0), &spec(5)),
        Err(GustafsonError::BranchCutHit(_))
    ));
    assert!(gustafson_first_rhs(1, &good).is_ok());
}

#[test]
fn j_omega_matches_closed_form_at_n2() {
    let x = [SpectralPoint::new(2, c64(0.3, -0.03))];
    let xp = [SpectralPoint::new(0, c64(-0.2, 0.04))];
    let zeta = Complex64::from_polar(0.7, 0.4);
    let r = j_omega_check(&x, &xp, c64(0.5, 0.7), c64(0.42, 0.0), zeta, &spec(40)).unwrap();
    let c = &r.comparison;
    assert!(c.rel_err() < 1e-4, "{} vs {} ({:e})", c.lhs.value, c.rhs, c.rel_err());
    assert!((r.via_second - c.lhs.value).norm() < 1e-10 * c.lhs.value.norm());
}

#[test]
fn j_omega_at_n1_and_outside_the_domain() {
    let zeta = Complex64::from_polar(1.4, -0.6);
    let r = j_omega_check(&[], &[], c64(0.5, -0.3), c64(0.4, 0.0), zeta, &spec(40)).unwrap();
    assert!(r.comparison.rel_err() < 1e-6, "{:e}", r.comparison.rel_err());
    // Re ω ≥ 1/2 leaves no separating contour at Re ν = 0 for both Γ[Z − ω ± iy]
    let e = j_omega_check(&[], &[], c64(0.5, -0.3), c64(0.6, 0.0), zeta, &spec(10)).unwrap_err();
    assert!(matches!(e, GustafsonError::ContoursDoNotSeparate(_)), "{e}");
}

#[test]
fn convergence_tables_are_monotone() {
    use gustafson::{convergence_table, MBProblem};
    let problems = [
        MBProblem::First {
            n: 1,
            params: MBParams {
                z_list: vec![p(0, 0.1, 0.3), p(0, 0.15, -0.2)],
                w_list: vec![p(0, 0.12, 0.1), p(2, 0.08, -0.4)],
            },
        },
        MBProblem::Second {
            n: 1,
            params: MBParams {
                z_list: vec![p(0, 0.1, 0.3)],
                w_list: vec![p(2, 0.08, -0.4)],
            },
            zeta: c64(1.0, 0.0),
        },
        MBProblem::First {
            n: 2,
            params: MBParams {
                z_list: vec![p(0, 0.1, 0.3), p(2, 0.05, -0.2), p(0, 0.07, 0.5)],
                w_list: vec![p(0, 0.12, 0.1), p(-2, 0.08, -0.4), p(0, 0.06, 0.0)],
            },
        },
        MBProblem::Second {
            n: 2,
            params: MBParams {
                z_list: vec![p(0, 0.1, 0.3), p(2, 0.05, -0.2)],
                w_list: vec![p(0, 0.04, 0.1), p(-2, 0.03, -0.4)],
            },
            zeta: c64(1.0, 0.0),
        },
        MBProblem::JOmega {
            x: vec![SpectralPoint::new(2, c64(0.3, -0.03))],
            x_prime: vec![SpectralPoint::new(0, c64(-0.2, 0.04))],
            z: c64(0.5, 0.7),
            omega: c64(0.42, 0.0),
            zeta: Complex64::from_polar(0.7, 0.4),
        },
    ];
    for problem in &problems {
        let t = convergence_table(problem, &MBSpec::default(), &[2, 4, 8, 16, 32], &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap();
        assert!(t.is_monotone(0, 1e-9 * t.rhs.norm()), "{problem:?}");
    }
}
