use cfield::{c64, cgamma, FieldExponent};
use gustafson::signs::{cross_sign_exponent, mu_sign_exponent, pair_sign_exponent, rearrangement_holds};
use gustafson::{fit_tail, GustafsonError, SpectralPoint};
use num_complex::Complex64;
use proptest::prelude::*;

fn gamma(a: Complex64, abar: Complex64) -> Complex64 {
    cgamma(&FieldExponent::new(a, abar).unwrap()).value
}

fn i() -> Complex64 {
    c64(0.0, 1.0)
}

fn point() -> impl Strategy<Value = (i32, f64, f64)> {
    (-4i32..=4, -1.0..1.0f64, -0.3..0.3f64)
}

fn points(len: usize, parity: i32) -> impl Strategy<Value = Vec<SpectralPoint>> {
    prop::collection::vec(point(), len).prop_map(move |v| {
        v.into_iter().map(|(k, re, im)| SpectralPoint::new(2 * k + parity, c64(re, im))).collect()
    })
}

proptest! {
    #[test]
    fn rearrangement_holds_for_n_and_n_minus_one(
        (ys, xs) in (1usize..5, 0i32..2).prop_flat_map(|(n, s)| (points(n, s), points(n - 1, s)))
    ) {
        prop_assert!(rearrangement_holds(&ys, &xs).unwrap());
    }

    #[test]
    fn reflection_of_bracket_gamma((k, re, im) in point()) {
        // Γ[v]Γ[−v] = −(−1)^{[v]}/(v v̄)
        let v = c64(re + 0.37, im);
        let vbar = v - k as f64;
        let lhs = gamma(v, vbar) * gamma(-v, -vbar);
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let rhs = -sign / (v * vbar);
        prop_assert!((lhs - rhs).norm() < 1e-11 * rhs.norm(), "{} {}", lhs, rhs);
    }

    #[test]
    fn mu_sign_matches_gamma_product(ys in points(3, 1)) {
        let mut prod = c64(1.0, 0.0);
        let mut poly = c64(1.0, 0.0);
        for k in 0..ys.len() {
            for j in 0..ys.len() {
                if k != j {
                    prod /= gamma(i() * (ys[k].x() - ys[j].x()), i() * (ys[k].xbar() - ys[j].xbar()));
                }
                if k < j {
                    poly *= (ys[k].x() - ys[j].x()) * (ys[k].xbar() - ys[j].xbar());
                }
            }
        }
        let e = mu_sign_exponent(&ys).unwrap();
        let expected = if e.rem_euclid(2) == 0 { poly } else { -poly };
        prop_assert!((prod - expected).norm() < 1e-9 * expected.norm().max(1e-3), "{} {}", prod, expected);
    }

    #[test]
    fn cross_sign_matches_component_swap(ys in points(2, 0), xs in points(2, 0)) {
        let mut swapped = c64(1.0, 0.0);
        let mut straight = c64(1.0, 0.0);
        for y in &ys {
            for x in &xs {
                swapped *= gamma(i() * (x.xbar() - y.xbar()), i() * (x.x() - y.x()));
                straight *= gamma(i() * (x.x() - y.x()), i() * (x.xbar() - y.xbar()));
            }
        }
        let e = cross_sign_exponent(&ys, &xs).unwrap();
        let expected = if e.rem_euclid(2) == 0 { straight } else { -straight };
        prop_assert!((swapped - expected).norm() < 1e-9 * expected.norm(), "{} {}", swapped, expected);
    }
}

#[test]
fn pair_sign_requires_equal_parity() {
    let a = SpectralPoint::new(3, c64(0.1, 0.0));
    let b = SpectralPoint::new(-1, c64(0.2, 0.0));
    assert_eq!(pair_sign_exponent(&a, &b).unwrap(), -2);
    let c = SpectralPoint::new(0, c64(0.2, 0.0));
    assert!(matches!(pair_sign_exponent(&a, &c), Err(GustafsonError::ParityMismatch { .. })));
}

#[test]
fn tail_fit_recovers_synthetic_limit() {
    let limit = c64(0.7, -0.2);
    let p = c64(1.3, 0.4);
    let series = |k: usize| {
        let r = c64(k as f64 + 1.0, 0.0);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        limit + c64(0.5, 0.1) * r.powc(-p) - c64(0.2, 0.0) * r.powc(-p - 1.0)
            + sign * c64(0.3, 0.3) * r.powc(-p - 1.0)
    };
    let partial: Vec<Complex64> = (0..=40).map(series).collect();
    let raw = (partial[40] - limit).norm();
    let fit = fit_tail(&partial, 1.0, p, &[0.0, std::f64::consts::PI], 4).unwrap();
    assert!((fit.limit - limit).norm() < 1e-10, "{} (raw {raw:e})", fit.limit);
    assert!(fit.err < 1e-6);
    assert!(fit_tail(&partial[..3], 1.0, p, &[0.0], 4).is_none());
}
