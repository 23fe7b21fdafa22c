//! Gamma function of the complex field, `Γ[a, abar] = Γ(a) / Γ(1 - abar)`,
//! its reciprocal and the exponent pairs it is evaluated on.

mod exponent;
mod gamma;
pub mod lngamma;

pub use exponent::{exponent_reflect, make_exponent, sign_factor, FieldExponent, INTEGER_DIFF_TOL};
pub use gamma::{afactor, cgamma, ln_cgamma, GammaValue, LnGamma};
pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CfieldError {
    #[error("exponent difference {a} - {abar} is not an integer")]
    NonIntegerDifference { a: Complex64, abar: Complex64 },
}

/// Shorthand for `Complex64::new(re, im)`.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
