//! Propagator diagrams over the complex plane, the integral identities that
//! rewrite them, and closed forms as canonical products of Γ-factors.

mod closed;
mod diagram;
pub mod json;
mod numeric;
mod reduce;
mod rules;

pub use closed::{resolve_symbol, ClosedFormFactor, GammaFactor, MomentumPower, MERGE_TOL};
pub use diagram::{Diagram, Edge, ExternalVertex, Position, RuleKind, Wave};
pub use numeric::numeric_eval;
pub use reduce::{enumerate_reductions, reduce, reduce_with_depth, Reduction, Step};
pub use rules::{
    apply_chain, apply_exchange, apply_fourier, apply_star_triangle, apply_triangle_star, find_free_vertices,
    ExchangePattern,
};

use num_complex::Complex64;
use plane::PlaneError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum DiagramError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("vertex {0} is external")]
    NotInternal(String),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("no binding for symbol {0}")]
    Unbound(String),
    #[error("vertex {0} is not a directed chain")]
    NotAChain(String),
    #[error("chain at {0} produces a zero index")]
    DegenerateChain(String),
    #[error("indices sum to ({0}, {1}), uniqueness condition fails")]
    UniquenessViolated(Complex64, Complex64),
    #[error("no triangle on {0}")]
    NotATriangle(String),
    #[error("no plane wave at vertex {0}")]
    NoPlaneWave(String),
    #[error("exchange changes the index sum")]
    IndexSumMismatch,
    #[error("vertex {0} has the wrong degree for this rule")]
    WrongDegree(String),
    #[error("no reduction path found ({} internal vertices left)", .0.internal.len())]
    StuckDiagram(Box<Diagram>),
    #[error("closed form hits a pole")]
    PoleEncountered,
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for DiagramError {
    fn from(e: serde_json::Error) -> Self {
        DiagramError::Json(e.to_string())
    }
}
