use num_complex::Complex64;

use crate::exponent::{sign_factor, FieldExponent};
use crate::lngamma::ln_gamma;

const INT_TOL: f64 = 1e-12;

/// Result of a complex-field Gamma evaluation, with poles reported in-band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaValue {
    pub value: Complex64,
    pub is_pole: bool,
    pub pole_order: u32,
}

impl GammaValue {
    fn finite(value: Complex64) -> Self {
        Self {
            value,
            is_pole: false,
            pole_order: 0,
        }
    }

    fn pole() -> Self {
        Self {
            value: Complex64::new(f64::INFINITY, 0.0),
            is_pole: true,
            pole_order: 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.is_pole && self.value == Complex64::new(0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_pole
    }
}

/// Log-domain value of `Γ[u]`: a finite logarithm, or a pole / zero of order one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LnGamma {
    Finite(Complex64),
    Pole,
    Zero,
}

fn near_int(z: Complex64) -> Option<i64> {
    let r = z.re.round();
    if z.im.abs() <= INT_TOL * (1.0 + r.abs()) && (z.re - r).abs() <= INT_TOL * (1.0 + r.abs()) {
        Some(r as i64)
    } else {
        None
    }
}

/// `ln Γ[u] = ln Γ(a) - ln Γ(1 - abar)` modulo `2πi`.
pub fn ln_cgamma(u: &FieldExponent) -> LnGamma {
    let a = u.a();
    let abar = u.abar();
    let one = Complex64::new(1.0, 0.0);
    match (near_int(a), near_int(abar)) {
        (Some(ia), Some(ib)) => {
            if ia <= 0 && ib <= 0 {
                LnGamma::Pole
            } else if ia >= 1 && ib >= 1 {
                LnGamma::Zero
            } else if ia <= 0 {
                // Γ(a) and Γ(1-abar) both singular; use the swapped form.
                let s = if sign_factor(u) < 0 {
                    Complex64::new(0.0, std::f64::consts::PI)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                LnGamma::Finite(s + ln_gamma(Complex64::new(ib as f64, 0.0)) - ln_gamma(Complex64::new(1.0 - ia as f64, 0.0)))
            } else {
                LnGamma::Finite(ln_gamma(Complex64::new(ia as f64, 0.0)) - ln_gamma(Complex64::new(1.0 - ib as f64, 0.0)))
            }
        }
        _ => LnGamma::Finite(ln_gamma(a) - ln_gamma(one - abar)),
    }
}

/// `Γ[u] = Γ(a) / Γ(1 - abar)`.
pub fn cgamma(u: &FieldExponent) -> GammaValue {
    match ln_cgamma(u) {
        LnGamma::Finite(l) => GammaValue::finite(l.exp()),
        LnGamma::Pole => GammaValue::pole(),
        LnGamma::Zero => GammaValue::finite(Complex64::new(0.0, 0.0)),
    }
}

/// `a(u) = 1 / Γ[u] = Γ(1 - abar) / Γ(a)`.
pub fn afactor(u: &FieldExponent) -> GammaValue {
    match ln_cgamma(u) {
        LnGamma::Finite(l) => GammaValue::finite((-l).exp()),
        LnGamma::Pole => GammaValue::finite(Complex64::new(0.0, 0.0)),
        LnGamma::Zero => GammaValue::pole(),
    }
}
