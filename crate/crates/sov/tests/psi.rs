use std::f64::consts::PI;

use cfield::{c64, Complex64};
use plane::{eval_propagator, QuadratureSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sov::{
    build_gamma, eigen_translation_check, phi_position_eval, psi_momentum_eval, ChainSpec, EigenfunctionSpec, Impurity, Kind,
    SeparatedPoint, Spin,
};

fn random_chain(rng: &mut ChaCha8Rng, n: usize, half: bool) -> ChainSpec {
    ChainSpec {
        n,
        spins: (0..n)
            .map(|_| Spin {
                n2: 2 * rng.gen_range(-1..=1) + half as i32,
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

fn random_point(rng: &mut ChaCha8Rng, half: bool) -> SeparatedPoint {
    SeparatedPoint::real(2 * rng.gen_range(-1..=1) + half as i32, rng.gen_range(-1.0..1.0))
}

fn momentum(rng: &mut ChaCha8Rng) -> Complex64 {
    c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))
}

#[test]
fn n1_is_constant_in_momentum() {
    let spec = EigenfunctionSpec::b(ChainSpec::homogeneous(1, 0, 0.3), c64(1.0, 0.0), vec![]);
    let q = QuadratureSpec::default();
    for p in [c64(0.3, 0.1), c64(-2.0, 5.0)] {
        let v = psi_momentum_eval(&spec, &[p], &q).unwrap().value;
        assert!((v - PI.sqrt()).norm() < 1e-15);
    }
    let r = eigen_translation_check(&spec, &[c64(0.4, -0.7)], &q).unwrap();
    assert!(r < 1e-15);
}

#[test]
fn n2_matches_hand_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let q = QuadratureSpec::default();
    for k in 0..10 {
        let half = k % 2 == 1;
        let chain = random_chain(&mut rng, 2, half);
        let x = random_point(&mut rng, half);
        let (p1, p2) = (momentum(&mut rng), momentum(&mut rng));
        let g = build_gamma(&chain, Kind::B).unwrap();
        let spec = EigenfunctionSpec::b(chain, p1 + p2, vec![x]);
        let v = psi_momentum_eval(&spec, &[p1, p2], &q).unwrap().value;
        // |p| (−1)^{[B]} (−i)^{[A]+[B]} D_{1−A}(p_1) D_{1−B}(p_2), A = γ_1 − ix, B = γ_2 + ix
        let a = g.at(1).minus_ix(&x).exponent().unwrap();
        let b = g.at(2).plus_ix(&x).exponent().unwrap();
        let ni = c64(0.0, -1.0);
        let want = (p1 + p2).norm()
            * (-1.0f64).powi(b.m())
            * ni.powi(a.m() + b.m())
            * eval_propagator(&a.reflect(), p1).unwrap()
            * eval_propagator(&b.reflect(), p2).unwrap();
        assert!((v - want).norm() < 1e-12 * want.norm(), "{v} {want}");
    }
}

#[test]
fn regulator_scales_by_last_momentum() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let q = QuadratureSpec::default();
    for n in [1, 2] {
        let chain = random_chain(&mut rng, n, false);
        let xs: Vec<_> = (1..n).map(|_| random_point(&mut rng, false)).collect();
        let ps: Vec<_> = (0..n).map(|_| momentum(&mut rng)).collect();
        let p: Complex64 = ps.iter().sum();
        let v0 = psi_momentum_eval(&EigenfunctionSpec::b(chain.clone(), p, xs.clone()), &ps, &q).unwrap().value;
        let v1 = psi_momentum_eval(&EigenfunctionSpec::b(chain.with_epsilon(0.2), p, xs), &ps, &q).unwrap().value;
        let want = v0 * ps[n - 1].norm().powf(0.4);
        assert!((v1 - want).norm() < 1e-12 * want.norm(), "N={n}: {v1} {want}");
    }
}

#[test]
fn n3_regulator_and_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let q = QuadratureSpec::default().with_tol(1e-7, 1e-5);
    let chain = random_chain(&mut rng, 3, false);
    let (x1, x2) = (random_point(&mut rng, false), random_point(&mut rng, false));
    let ps = [c64(0.7, -0.3), c64(-0.2, 0.9), c64(0.5, 0.4)];
    let p: Complex64 = ps.iter().sum();
    let v12 = psi_momentum_eval(&EigenfunctionSpec::b(chain.clone(), p, vec![x1, x2]), &ps, &q).unwrap();
    let v21 = psi_momentum_eval(&EigenfunctionSpec::b(chain.clone(), p, vec![x2, x1]), &ps, &q).unwrap();
    assert!((v12.value - v21.value).norm() < 1e-3 * v12.value.norm(), "{v12:?} {v21:?}");
    let ve = psi_momentum_eval(&EigenfunctionSpec::b(chain.with_epsilon(0.2), p, vec![x1, x2]), &ps, &q).unwrap();
    let want = v12.value * ps[2].norm().powf(0.4);
    assert!((ve.value - want).norm() < 1e-3 * want.norm());
}

#[test]
fn psi_needs_b_kind_and_matching_momenta() {
    let q = QuadratureSpec::default();
    let chain = ChainSpec::homogeneous(2, 0, 0.1);
    let a = EigenfunctionSpec::a(chain.clone(), vec![SeparatedPoint::real(0, 0.1), SeparatedPoint::real(0, 0.2)]);
    assert!(psi_momentum_eval(&a, &[c64(1.0, 0.0), c64(0.5, 0.0)], &q).is_err());
    let b = EigenfunctionSpec::b(chain, c64(1.0, 0.0), vec![SeparatedPoint::real(0, 0.1)]);
    assert!(psi_momentum_eval(&b, &[c64(1.0, 0.0)], &q).is_err());
}

#[test]
fn phi_n1_is_a_single_propagator() {
    let chain = ChainSpec {
        n: 1,
        spins: vec![Spin { n2: 2, rho: 0.2 }],
        impurities: vec![Impurity { re: -0.1, im: 0.0 }],
        epsilon: 0.0,
    };
    let x = SeparatedPoint::real(-2, 0.35);
    let g = build_gamma(&chain, Kind::A).unwrap();
    let z = c64(0.3, -0.8);
    let v = phi_position_eval(&EigenfunctionSpec::a(chain, vec![x]), &[z], &QuadratureSpec::default()).unwrap().value;
    let want = eval_propagator(&g.at(1).minus_ix(&x).exponent().unwrap(), z).unwrap() / PI.sqrt();
    assert!((v - want).norm() < 1e-14);
}

#[test]
fn phi_n2_symmetric_and_not_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let q = QuadratureSpec::default().with_tol(1e-6, 1e-4);
    let chain = random_chain(&mut rng, 2, false);
    let (x1, x2) = (
        SeparatedPoint::new(0, c64(0.3, -0.1)),
        SeparatedPoint::new(2, c64(-0.4, -0.1)),
    );
    let zs = [c64(0.4, 0.1), c64(-0.3, 0.6)];
    let a = phi_position_eval(&EigenfunctionSpec::a(chain.clone(), vec![x1, x2]), &zs, &q).unwrap();
    let b = phi_position_eval(&EigenfunctionSpec::a(chain.clone(), vec![x2, x1]), &zs, &q).unwrap();
    assert!((a.value - b.value).norm() < 1e-3 * a.value.norm(), "{a:?} {b:?}");
    let shift = c64(0.5, -0.2);
    let moved = [zs[0] + shift, zs[1] + shift];
    let c = phi_position_eval(&EigenfunctionSpec::a(chain, vec![x1, x2]), &moved, &q).unwrap();
    assert!((a.value - c.value).norm() > 1e-2 * a.value.norm());
}
