//! Separated-variable eigenfunctions of the SL(2,C) spin chain at small N:
//! γ-vectors, the prefactors ϖ and ω, Ψ and Φ, their scalar products in
//! closed form, the SoV measure, and eigen-relation checks.

mod chain;
pub mod epsilon;
mod factors;
mod psi;
mod scalar;

pub use chain::{
    build_gamma, rho_map, ChainSpec, EigenfunctionSpec, GammaVector, Impurity, IndexPair, Kind, SeparatedPoint, Spin,
};
pub use factors::{
    gamma_of, lambda_kernel, measure_mu, omega_factor, omega_forms, sov_constants, varpi1, varpi_prefactor,
    SELF_CHECK_TOL,
};
pub use psi::{
    b_residual, eigen_b_check, eigen_translation_check, momentum_form, phi_position_eval, psi_derivatives,
    psi_momentum_eval, psi_position_eval, varpi_exponents, MomentumForm, MomentumLine, PsiDerivatives,
};
pub use scalar::{
    bb_sign, regulate, scalar_ab_closed, scalar_ab_fourier_n1, scalar_bb_closed, scalar_bb_diagram, scalar_bb_forms,
    scalar_bb_quadrature, scalar_mixed_closed, scalar_mixed_quadrature_n1, BranchPower, ClosedProduct, BRANCH_CUT_TOL,
};

use diagrams::DiagramError;
use num_complex::Complex64;
use plane::PlaneError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SovError {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("ρ needs at least 3 entries, got {0}")]
    TooShort(usize),
    #[error("({a}, {abar}) differ by a non-integer")]
    NonIntegerIndex { a: Complex64, abar: Complex64 },
    #[error("Γ-factor at a pole")]
    PoleEncountered,
    #[error("outside the convergence domain: {0}")]
    ConvergenceDomainViolated(String),
    #[error("power of {0} too close to the branch cut")]
    BranchCutHit(Complex64),
    #[error("{0}: printed forms differ by {1:e}")]
    SelfCheckFailed(String, f64),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
