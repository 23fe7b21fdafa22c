use std::collections::HashMap;

use cfield::{c64, Complex64};
use diagrams::{enumerate_reductions, reduce};
use plane::QuadratureSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sov::{
    bb_sign, build_gamma, scalar_ab_closed, scalar_ab_fourier_n1, scalar_bb_closed, scalar_bb_diagram, scalar_bb_forms,
    scalar_bb_quadrature, scalar_mixed_closed, scalar_mixed_quadrature_n1, ChainSpec, GammaVector, Impurity, Kind,
    SeparatedPoint, Spin, SovError,
};

fn random_chain(rng: &mut ChaCha8Rng, n: usize) -> ChainSpec {
    ChainSpec {
        n,
        spins: (0..n)
            .map(|_| Spin {
                n2: 2 * rng.gen_range(-1..=1),
                rho: rng.gen_range(-0.8..0.8),
            })
            .collect(),
        impurities: (0..n)
            .map(|_| Impurity {
                re: rng.gen_range(-0.5..0.5),
                im: 0.0,
            })
            .collect(),
        epsilon: 0.0,
    }
}

fn random_points(rng: &mut ChaCha8Rng, k: usize, im: f64) -> Vec<SeparatedPoint> {
    (0..k)
        .map(|_| SeparatedPoint::new(2 * rng.gen_range(-1..=1), c64(rng.gen_range(-1.0..1.0), im)))
        .collect()
}

fn gamma_b(rng: &mut ChaCha8Rng, n: usize) -> GammaVector {
    build_gamma(&random_chain(rng, n), Kind::B).unwrap()
}

#[test]
fn bb_reduction_matches_closed_form_n2() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let g = gamma_b(&mut rng, 2);
        let x = random_points(&mut rng, 1, 0.0);
        let y = random_points(&mut rng, 1, 0.0);
        let d = scalar_bb_diagram(&x, &y, &g, 0.13, 0.07).unwrap();
        let r = reduce(&d).unwrap();
        let closed = scalar_bb_closed(&x, &y, &g, 0.13, 0.07).unwrap();
        assert!(r.factor.approx_eq(&closed, 1e-9), "{:?}\n{:?}", r.factor, closed);
        let all = enumerate_reductions(&d, 3, 50).unwrap();
        assert!(all.iter().all(|o| o.same_as(&r, 1e-9)));
    }
}

#[test]
fn bb_reduction_matches_closed_form_n3_with_unit_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..3 {
        let g = gamma_b(&mut rng, 3);
        assert_eq!(bb_sign(&g).unwrap(), 1);
        let x = random_points(&mut rng, 2, 0.0);
        let y = random_points(&mut rng, 2, 0.0);
        let d = scalar_bb_diagram(&x, &y, &g, 0.11, 0.05).unwrap();
        let r = reduce(&d).unwrap();
        let closed = scalar_bb_closed(&x, &y, &g, 0.11, 0.05).unwrap();
        assert!(r.factor.approx_eq(&closed, 1e-9), "{:?}\n{:?}", r.factor, closed);
        let b: HashMap<String, Complex64> = HashMap::new();
        let v = r.eval(&b).unwrap();
        let w = closed.eval_constant().unwrap();
        assert!((v - w).norm() < 1e-10 * w.norm());
    }
}

#[test]
fn bb_two_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let g = gamma_b(&mut rng, n);
        let x = random_points(&mut rng, n - 1, 0.1);
        let y = random_points(&mut rng, n - 1, 0.1);
        let (a, b) = scalar_bb_forms(&x, &y, &g, 0.2, 0.1).unwrap();
        let (va, vb) = (a.eval_constant().unwrap(), b.eval_constant().unwrap());
        assert!((va - vb).norm() <= 1e-10 * va.norm(), "{va} {vb}");
    }
}

#[test]
fn bb_closed_form_matches_quadrature_n2() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let quad = QuadratureSpec::default().with_tol(1e-9, 1e-5);
    for _ in 0..3 {
        let g = gamma_b(&mut rng, 2);
        let x = random_points(&mut rng, 1, 0.1);
        let y = random_points(&mut rng, 1, 0.1);
        let closed = scalar_bb_closed(&x, &y, &g, 0.3, 0.3).unwrap().eval_constant().unwrap();
        let num = scalar_bb_quadrature(&x, &y, &g, 0.3, 0.3, c64(0.8, -0.5), &quad).unwrap().value;
        assert!((num - closed).norm() < 1e-3 * closed.norm(), "{num} {closed}");
    }
}

#[test]
fn ab_n1_is_a_fourier_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let quad = QuadratureSpec::default().with_tol(1e-10, 1e-7);
    for _ in 0..5 {
        let g = build_gamma(&random_chain(&mut rng, 1), Kind::A).unwrap();
        let im = rng.gen_range(-0.2..0.2);
        let x = random_points(&mut rng, 1, im);
        let p = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let closed = scalar_ab_closed(&x, &[], &g, p).unwrap().value().unwrap();
        let num = scalar_ab_fourier_n1(&x[0], &g, p, &quad).unwrap();
        assert!((num - closed).norm() < 1e-5 * closed.norm(), "{num} {closed}");
    }
}

#[test]
fn ab_rejects_outside_convergence_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let g = build_gamma(&random_chain(&mut rng, 2), Kind::A).unwrap();
    let x = random_points(&mut rng, 2, -0.2);
    let y = random_points(&mut rng, 1, 0.1);
    assert!(matches!(
        scalar_ab_closed(&x, &y, &g, c64(1.0, 0.0)),
        Err(SovError::ConvergenceDomainViolated(_))
    ));
}

#[test]
fn mixed_n1_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let quad = QuadratureSpec::default().with_tol(1e-10, 1e-7);
    for _ in 0..5 {
        let g = gamma_b(&mut rng, 2);
        let im = rng.gen_range(-0.2..0.2);
        let x = random_points(&mut rng, 1, im);
        let q1 = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q2 = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let closed = scalar_mixed_closed(&[], &x, &g, q1, q2).unwrap().value().unwrap();
        let num = scalar_mixed_quadrature_n1(&x[0], &g, q1, q2, &quad).unwrap();
        assert!((num - closed).norm() < 1e-3 * closed.norm(), "{num} {closed}");
    }
}

#[test]
fn mixed_is_continuous_across_the_negative_axis() {
    let g = build_gamma(
        &ChainSpec {
            n: 2,
            spins: vec![Spin { n2: 1, rho: 0.1 }, Spin { n2: -1, rho: -0.2 }],
            impurities: vec![Impurity { re: 0.2, im: 0.0 }; 2],
            epsilon: 0.0,
        },
        Kind::B,
    )
    .unwrap();
    let x = [SeparatedPoint::new(1, c64(0.3, 0.05))];
    let q1 = c64(0.4, 0.9);
    // iq2 = −1 ± iδ and −q2/q1 crosses the negative axis nearby.
    let above = scalar_mixed_closed(&[], &x, &g, q1, c64(1e-9, 1.0)).unwrap().value().unwrap();
    let below = scalar_mixed_closed(&[], &x, &g, q1, c64(-1e-9, 1.0)).unwrap().value().unwrap();
    assert!((above - below).norm() < 1e-7 * above.norm(), "{above} {below}");
}

#[test]
fn mixed_rejects_branch_cut_for_mixed_parity() {
    let g = build_gamma(
        &ChainSpec {
            n: 2,
            spins: vec![Spin { n2: 1, rho: 0.1 }, Spin { n2: 1, rho: -0.2 }],
            impurities: vec![Impurity { re: 0.0, im: 0.0 }; 2],
            epsilon: 0.0,
        },
        Kind::B,
    )
    .unwrap();
    // Integer n against half-integer spins: the powers are genuinely multivalued.
    let x = [SeparatedPoint::new(2, c64(0.3, 0.0))];
    let r = scalar_mixed_closed(&[], &x, &g, c64(1.0, 0.0), c64(0.0, 1.0)).unwrap().value();
    assert!(matches!(r, Err(SovError::BranchCutHit(_))), "{r:?}");
}

#[test]
fn mixed_n1_half_integer_spins() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let quad = QuadratureSpec::default().with_tol(1e-10, 1e-7);
    for _ in 0..6 {
        let chain = ChainSpec {
            n: 2,
            spins: (0..2)
                .map(|_| Spin {
                    n2: 2 * rng.gen_range(-1..=1) + 1,
                    rho: rng.gen_range(-0.8..0.8),
                })
                .collect(),
            impurities: vec![Impurity { re: rng.gen_range(-0.5..0.5), im: 0.0 }; 2],
            epsilon: 0.0,
        };
        let g = build_gamma(&chain, Kind::B).unwrap();
        let x = [SeparatedPoint::new(2 * rng.gen_range(-1..=1) + 1, c64(rng.gen_range(-1.0..1.0), 0.05))];
        let q1 = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q2 = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let closed = scalar_mixed_closed(&[], &x, &g, q1, q2).unwrap().value().unwrap();
        let num = scalar_mixed_quadrature_n1(&x[0], &g, q1, q2, &quad).unwrap();
        assert!((num - closed).norm() < 1e-3 * closed.norm(), "{num} {closed}");
    }
}
