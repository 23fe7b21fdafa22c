use cfield::{c64, Complex64, FieldExponent};
use plane::eval_propagator;
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = FieldExponent> {
    (-4i32..=4, -2.0f64..2.0, -3.0f64..3.0).prop_map(|(m, re, im)| FieldExponent::from_mw(m, c64(re, im)))
}

fn point() -> impl Strategy<Value = Complex64> {
    (0.05f64..5.0, -3.1f64..3.1).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn homogeneity(a in exponent(), z in point(), lam in 0.1f64..10.0) {
        let lhs = eval_propagator(&a, z * lam).unwrap();
        let scale = (-2.0 * a.w() * lam.ln()).exp();
        let rhs = scale * eval_propagator(&a, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn product_adds_exponents(a in exponent(), b in exponent(), z in point()) {
        let lhs = eval_propagator(&a, z).unwrap() * eval_propagator(&b, z).unwrap();
        let rhs = eval_propagator(&(a + b), z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn unitary_line_modulus(m in -4i32..=4, s in -3.0f64..3.0, z in point()) {
        let a = FieldExponent::from_mw(m, c64(0.5, s));
        let v = eval_propagator(&a, z).unwrap();
        prop_assert!((v.norm() - 1.0 / z.norm()).abs() <= 1e-12 / z.norm());
    }
}
