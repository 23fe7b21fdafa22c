//! Complex-field Gustafson integrals checked numerically: the lattice sums and
//! contour integrals over `u_k = n_k/2 + ν_k` against their Γ-product closed forms.

mod engine;
mod identities;
pub mod signs;

pub use engine::{fit_tail, TailFit};
pub use identities::{
    convergence_table, gustafson_first, gustafson_first_rhs, gustafson_second, gustafson_second_rhs, j_omega_check, j_omega_params,
    j_omega_rhs, ConvergenceRow, ConvergenceTable, JOmegaResult, MBComparison, MBProblem,
};

use cfield::{c64, FieldExponent};
use num_complex::Complex64;
use plane::IntegralEstimate;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GustafsonError {
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("bracket {bracket} of {name} does not match the lattice parity σ = {sigma}")]
    ParityMismatch { name: String, bracket: f64, sigma: u8 },
    #[error("a Γ-pole lies {distance:e} from the contour of variable {variable}")]
    PoleOnContour { variable: usize, distance: f64 },
    #[error("no straight contour separates the pole series: {0}")]
    ContoursDoNotSeparate(String),
    #[error("ζ = {0} is on the branch cut")]
    BranchCutHit(Complex64),
    #[error("outside the convergence domain: {0}")]
    ConvergenceDomainViolated(String),
    #[error("quadrature did not converge: {0:?}")]
    NotConverged(IntegralEstimate),
}

/// A pair `(z, z̄) = (n/2 + x, −n/2 + x)`, stored with the doubled bracket `n2 = 2n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MBPair {
    pub n2: i32,
    pub x: Complex64,
}

impl MBPair {
    pub fn new(n2: i32, x: Complex64) -> Self {
        Self { n2, x }
    }

    /// Pair with `z = z̄ = x`.
    pub fn scalar(x: Complex64) -> Self {
        Self { n2: 0, x }
    }

    /// From the two components; `z − z̄` must be a multiple of 1/2.
    pub fn from_components(z: Complex64, zbar: Complex64) -> Result<Self, GustafsonError> {
        let d = 2.0 * (z - zbar);
        let r = d.re.round();
        if (d - c64(r, 0.0)).norm() > 1e-9 {
            return Err(GustafsonError::InvalidSpec(format!("{z} − {zbar} is not a multiple of 1/2")));
        }
        Ok(Self {
            n2: r as i32,
            x: (z + zbar) * 0.5,
        })
    }

    pub fn z(&self) -> Complex64 {
        self.x + self.n2 as f64 / 4.0
    }

    pub fn zbar(&self) -> Complex64 {
        self.x - self.n2 as f64 / 4.0
    }

    /// `z − z̄`.
    pub fn bracket(&self) -> f64 {
        self.n2 as f64 / 2.0
    }

    /// The Γ-exponent of the pair; `None` when the bracket is not an integer.
    pub fn exponent(&self) -> Option<FieldExponent> {
        (self.n2 % 2 == 0).then(|| FieldExponent::from_mw(self.n2 / 2, self.x))
    }
}

impl std::ops::Add for MBPair {
    type Output = MBPair;
    fn add(self, o: MBPair) -> MBPair {
        MBPair::new(self.n2 + o.n2, self.x + o.x)
    }
}

impl std::ops::Sub for MBPair {
    type Output = MBPair;
    fn sub(self, o: MBPair) -> MBPair {
        MBPair::new(self.n2 - o.n2, self.x - o.x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MBParams {
    pub z_list: Vec<MBPair>,
    pub w_list: Vec<MBPair>,
}

impl MBParams {
    /// `Σ Re(x_m + y_m)`, the exponent controlling convergence.
    pub fn real_sum(&self) -> f64 {
        self.z_list.iter().chain(&self.w_list).map(|p| p.x.re).sum()
    }
}

/// Truncation and contour choices for the lattice sum-plus-integral.
#[derive(Clone, Debug, PartialEq)]
pub struct MBSpec {
    /// Lattice parity: `n_k ∈ ℤ + σ/2`.
    pub sigma: u8,
    /// Shells `0..=n_max` of each discrete sum.
    pub n_max: usize,
    /// `|Im ν| ≤ nu_cutoff` on the contour; beyond it the tails are integrated separately or dropped.
    pub nu_cutoff: f64,
    /// `Re ν_k` on the contour of each variable. Empty picks a separating value.
    pub contour_shifts: Vec<f64>,
    pub tol: f64,
    /// Integrate the ν tails beyond the cutoff.
    pub nu_tails: bool,
    /// Extrapolate the shell partial sums past `n_max`.
    pub n_extrapolate: bool,
}

impl Default for MBSpec {
    fn default() -> Self {
        Self {
            sigma: 0,
            n_max: 40,
            nu_cutoff: 30.0,
            contour_shifts: Vec::new(),
            tol: 1e-10,
            nu_tails: true,
            n_extrapolate: true,
        }
    }
}

impl MBSpec {
    pub fn validate(&self) -> Result<(), GustafsonError> {
        if self.sigma > 1 {
            return Err(GustafsonError::InvalidSpec(format!("σ = {} must be 0 or 1", self.sigma)));
        }
        if self.n_max < 1 {
            return Err(GustafsonError::InvalidSpec("n_max must be at least 1".into()));
        }
        if !(self.nu_cutoff > 0.0) || !self.nu_cutoff.is_finite() {
            return Err(GustafsonError::InvalidSpec("nu_cutoff must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(GustafsonError::InvalidSpec("tol must be positive".into()));
        }
        if self.contour_shifts.iter().any(|c| !c.is_finite()) {
            return Err(GustafsonError::InvalidSpec("non-finite contour shift".into()));
        }
        Ok(())
    }
}

/// A separated variable `x = in/2 + ν`, `x̄ = −in/2 + ν`, with `n2 = 2n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub n2: i32,
    pub nu: Complex64,
}

impl SpectralPoint {
    pub fn new(n2: i32, nu: Complex64) -> Self {
        Self { n2, nu }
    }

    pub fn x(&self) -> Complex64 {
        self.nu + c64(0.0, self.n2 as f64 / 4.0)
    }

    pub fn xbar(&self) -> Complex64 {
        self.nu - c64(0.0, self.n2 as f64 / 4.0)
    }

    /// The pair `(ix, ix̄)`.
    pub fn times_i(&self) -> MBPair {
        MBPair::new(-self.n2, c64(0.0, 1.0) * self.nu)
    }
}
