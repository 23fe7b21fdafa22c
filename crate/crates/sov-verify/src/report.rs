use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::VerifyError;

/// One verified relation. `pass ⇔ rel_err ≤ tol`, or `abs_err ≤ tol` when `rhs = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub evals: u64,
    pub wall_time: f64,
    /// Why the check could not be evaluated; the error fields are then `f64::MAX`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub(crate) fn compare(name: String, anchor: &str, lhs: Complex64, rhs: Complex64, tol: f64, evals: u64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = if rhs.norm() > 0.0 { abs_err / rhs.norm() } else { abs_err };
        let pass = if rhs.norm() > 0.0 { rel_err <= tol } else { abs_err <= tol };
        Self {
            name,
            paper_anchor: anchor.to_string(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            pass,
            evals,
            wall_time: 0.0,
            error: None,
        }
    }

    pub(crate) fn failed(name: String, anchor: &str, tol: f64, error: String) -> Self {
        Self {
            name,
            paper_anchor: anchor.to_string(),
            lhs: Complex64::new(0.0, 0.0),
            rhs: Complex64::new(0.0, 0.0),
            abs_err: f64::MAX,
            rel_err: f64::MAX,
            tol,
            pass: false,
            evals: 0,
            wall_time: 0.0,
            error: Some(error),
        }
    }
}

/// A convergence study: one row per truncation level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub paper_anchor: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub monotone: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub budget_exceeded: bool,
    pub wall_time: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: &str, seed: u64, checks: Vec<Check>, tables: Vec<Table>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            suite: suite.to_string(),
            seed,
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
                budget_exceeded: false,
                wall_time: 0.0,
            },
            checks,
            tables,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0 && !self.summary.budget_exceeded
    }

    pub fn to_json(&self) -> Result<String, VerifyError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, VerifyError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn sci(x: f64) -> String {
    if x == f64::MAX {
        "-".into()
    } else {
        format!("{x:.2e}")
    }
}

pub fn render_text(r: &Report) -> String {
    let name_w = r.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(4).max(4);
    let anchor_w = r.checks.iter().map(|c| c.paper_anchor.chars().count()).max().unwrap_or(6).max(6);
    let mut s = String::new();
    let _ = writeln!(s, "suite {} seed {}", r.suite, r.seed);
    let _ = writeln!(
        s,
        "{:<name_w$}  {:<anchor_w$}  {:>9}  {:>9}  {:>9}  {:>6}  {:>9}",
        "name", "anchor", "rel_err", "abs_err", "tol", "result", "time[s]"
    );
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{:<name_w$}  {:<anchor_w$}  {:>9}  {:>9}  {:>9}  {:>6}  {:>9.3}",
            c.name,
            c.paper_anchor,
            sci(c.rel_err),
            sci(c.abs_err),
            sci(c.tol),
            if c.pass { "pass" } else { "FAIL" },
            c.wall_time
        );
        if let Some(e) = &c.error {
            let _ = writeln!(s, "    error: {e}");
        }
    }
    for t in &r.tables {
        let _ = writeln!(s, "\n{} ({}){}", t.name, t.paper_anchor, if t.monotone { "" } else { "  NOT MONOTONE" });
        let _ = writeln!(s, "{}", t.columns.iter().map(|c| format!("{c:>12}")).collect::<String>());
        for row in &t.rows {
            let _ = writeln!(s, "{}", row.iter().map(|v| format!("{v:>12.4e}")).collect::<String>());
        }
    }
    let _ = writeln!(
        s,
        "\n{} checks, {} passed, {} failed{}",
        r.summary.total,
        r.summary.passed,
        r.summary.failed,
        if r.summary.budget_exceeded { ", budget exceeded" } else { "" }
    );
    s
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(r: &Report, path: Option<&Path>, format: Format) -> Result<(), VerifyError> {
    let body = match format {
        Format::Json => r.to_json()? + "\n",
        Format::Text => render_text(r),
    };
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| VerifyError::io(p, e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
