//! Propagators `D_α(z) = z^{-a} z̄^{-abar}` and quadrature over `C^k`.

mod c2;
pub mod de;
mod wave;

use cfield::FieldExponent;
use num_complex::Complex64;

pub use c2::integrate_c2;
pub use wave::{fourier_closed, fourier_propagator, plane_wave_integral, plane_wave_sum, WaveFactor, WaveTerm};

/// A point of the complex plane (position or momentum).
pub type PlanePoint = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Radius scale for the radial maps; tails beyond it are covered by the
    /// double-exponential map to infinity.
    pub outer_cutoff: f64,
    pub singularity_centers: Vec<PlanePoint>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_evals: 50_000_000,
            outer_cutoff: 1.0,
            singularity_centers: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_centers(mut self, centers: &[PlanePoint]) -> Self {
        self.singularity_centers = centers.to_vec();
        self
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<(), PlaneError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.outer_cutoff > 0.0) {
            return Err(PlaneError::InvalidSpec("tolerances and cutoff must be positive".into()));
        }
        if self.singularity_centers.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(PlaneError::InvalidSpec("non-finite singularity center".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralEstimate {
    pub value: Complex64,
    pub err: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlaneError {
    #[error("propagator evaluated at the origin")]
    OriginSingularity,
    #[error("quadrature did not converge: {0:?}")]
    NotConverged(IntegralEstimate),
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported dimension k = {0}")]
    BadDimension(usize),
    #[error("local singularity power {0} is too close to the integrability bound 2")]
    SingularityTooStrong(f64),
}

impl PlaneError {
    /// The best estimate carried by a `NotConverged` error.
    pub fn estimate(&self) -> Option<IntegralEstimate> {
        match self {
            PlaneError::NotConverged(e) => Some(*e),
            _ => None,
        }
    }
}

/// `D_α(z) = |z|^{-(a+abar)} e^{-i m arg z}`.
pub fn eval_propagator(alpha: &FieldExponent, z: PlanePoint) -> Result<Complex64, PlaneError> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(PlaneError::OriginSingularity);
    }
    Ok(propagator_unchecked(alpha, z))
}

/// `D_α(z)` without the origin check (returns inf/nan at 0).
#[inline]
pub fn propagator_unchecked(alpha: &FieldExponent, z: Complex64) -> Complex64 {
    let lr = z.norm().ln();
    let th = z.im.atan2(z.re);
    (-2.0 * alpha.w() * lr - Complex64::new(0.0, alpha.m() as f64 * th)).exp()
}

/// `ln D_α(z)` modulo `2πi`.
#[inline]
pub fn ln_propagator(alpha: &FieldExponent, z: Complex64) -> Complex64 {
    let lr = z.norm().ln();
    let th = z.im.atan2(z.re);
    -2.0 * alpha.w() * lr - Complex64::new(0.0, alpha.m() as f64 * th)
}

/// Local singularity power `Re(a + abar)` of `D_α` at its center.
pub fn local_power(alpha: &FieldExponent) -> f64 {
    2.0 * alpha.w().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use cfield::c64;

    #[test]
    fn propagator_examples() {
        let a = FieldExponent::from_mw(0, c64(0.5, 0.0));
        assert!((eval_propagator(&a, c64(2.0, 0.0)).unwrap() - 0.5).norm() < 1e-15);
        let b = FieldExponent::from_mw(1, c64(0.5, 0.0));
        assert!((eval_propagator(&b, c64(0.0, 1.0)).unwrap() - c64(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(eval_propagator(&b, c64(0.0, 0.0)), Err(PlaneError::OriginSingularity));
    }

    #[test]
    fn continuity_across_negative_axis() {
        let a = FieldExponent::from_mw(3, c64(0.3, 0.7));
        let up = eval_propagator(&a, c64(-1.0, 1e-8)).unwrap();
        let dn = eval_propagator(&a, c64(-1.0, -1e-8)).unwrap();
        assert!((up - dn).norm() < 1e-6);
    }
}
