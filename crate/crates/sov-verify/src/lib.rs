//! Batch verification harness: seeded suites of numeric checks against the
//! closed forms implemented in the sibling crates, with JSON and text reports.

mod report;
mod suites;
mod tools;

pub use report::{emit_report, render_text, Check, Format, Report, Summary, Table};
pub use suites::{run_suite, Suite, SuiteConfig};
pub use tools::{eval_point, load_chain, reduce_diagram, EvalFunction, EvalPoint};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget of {budget} s exceeded; {skipped} checks skipped")]
    BudgetExceeded {
        budget: f64,
        skipped: usize,
        report: Box<Report>,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Sov(#[from] sov::SovError),
    #[error(transparent)]
    Diagram(#[from] diagrams::DiagramError),
}

impl VerifyError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        VerifyError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
