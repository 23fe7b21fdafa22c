mod eigen;
mod gamma;
mod gustafson;
mod rules;
mod scalar;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sov::ChainSpec;

use crate::report::{Check, Report, Table};
use crate::{load_chain, VerifyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Gamma,
    Rules,
    ScalarProducts,
    Eigen,
    Gustafson,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Gamma, Suite::Rules, Suite::ScalarProducts, Suite::Eigen, Suite::Gustafson];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Rules => "rules",
            Suite::ScalarProducts => "scalar-products",
            Suite::Eigen => "eigen",
            Suite::Gustafson => "gustafson",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ALL.to_vec(),
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::Config(format!("unknown suite {s:?}")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// N = 2 chain replacing the seeded chains of the eigen and scalar-product suites.
    pub chain_file: Option<PathBuf>,
    /// Suite name (or "all") to a tolerance overriding the built-in per-check ones.
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    /// Seconds; checks not started by then are skipped.
    pub budget: Option<f64>,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            chain_file: None,
            tolerances: BTreeMap::new(),
            seed: 0,
            budget: None,
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        for (k, &v) in &self.tolerances {
            if k != "all" && Suite::from_str(k).is_err() {
                return Err(VerifyError::Config(format!("tolerance for unknown suite {k:?}")));
            }
            if !(v > 0.0 && v.is_finite()) {
                return Err(VerifyError::Config(format!("tolerance for {k} must be positive, got {v}")));
            }
        }
        if let Some(b) = self.budget {
            if !(b > 0.0) {
                return Err(VerifyError::Config(format!("budget must be positive, got {b}")));
            }
        }
        if let Some(p) = &self.chain_file {
            if !p.exists() {
                return Err(VerifyError::Config(format!("chain file {} does not exist", p.display())));
            }
        }
        Ok(())
    }

    fn tolerance(&self, s: Suite) -> Option<f64> {
        self.tolerances.get(s.name()).or_else(|| self.tolerances.get("all")).copied()
    }
}

pub(crate) struct Row {
    pub name: String,
    pub anchor: &'static str,
    pub tol: f64,
    /// Structural rows (counts, growth) keep their tolerance under overrides.
    pub fixed: bool,
}

impl Row {
    pub fn new(name: impl Into<String>, anchor: &'static str, tol: f64) -> Self {
        Self {
            name: name.into(),
            anchor,
            tol,
            fixed: false,
        }
    }

    pub fn fixed(name: impl Into<String>, anchor: &'static str, tol: f64) -> Self {
        Self {
            fixed: true,
            ..Self::new(name, anchor, tol)
        }
    }
}

#[derive(Default)]
pub(crate) struct Outcome {
    /// `(lhs, rhs)` per row, in row order.
    pub values: Vec<(Complex64, Complex64)>,
    pub evals: u64,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn one(lhs: Complex64, rhs: Complex64, evals: u64) -> Self {
        Self {
            values: vec![(lhs, rhs)],
            evals,
            tables: Vec::new(),
        }
    }
}

type Job = Box<dyn Fn() -> Result<Outcome, String> + Send + Sync>;

pub(crate) struct Task {
    pub rows: Vec<Row>,
    pub job: Job,
}

impl Task {
    pub fn new(rows: Vec<Row>, job: impl Fn() -> Result<Outcome, String> + Send + Sync + 'static) -> Self {
        Self { rows, job: Box::new(job) }
    }

    pub fn single(row: Row, job: impl Fn() -> Result<Outcome, String> + Send + Sync + 'static) -> Self {
        Self::new(vec![row], job)
    }
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The pair with the largest relative difference.
pub(crate) fn worst(pairs: impl IntoIterator<Item = (Complex64, Complex64)>) -> (Complex64, Complex64) {
    let rel = |(a, b): &(Complex64, Complex64)| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE);
    pairs
        .into_iter()
        .fold(None, |best: Option<(Complex64, Complex64)>, p| match best {
            Some(b) if rel(&b) >= rel(&p) => Some(b),
            _ => Some(p),
        })
        .unwrap_or((real(0.0), real(0.0)))
}

/// `Σ max(0, e_{k+1} − e_k)` over steps whose new error is above `floor`.
pub(crate) fn growth(errs: &[f64], floor: f64) -> f64 {
    errs.windows(2).filter(|w| w[1] >= floor).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

fn tasks_for(s: Suite, seed: u64, chain: Option<&ChainSpec>) -> Result<Vec<Task>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(s as u64);
    match s {
        Suite::Gamma => Ok(gamma::tasks(&mut rng)),
        Suite::Rules => Ok(rules::tasks(&mut rng)),
        Suite::ScalarProducts => scalar::tasks(&mut rng, chain),
        Suite::Eigen => eigen::tasks(&mut rng, chain),
        Suite::Gustafson => Ok(gustafson::tasks(&mut rng)),
        Suite::All => unreachable!(),
    }
}

fn run_task(t: &Task, deadline: Option<Instant>) -> (Vec<Check>, Vec<Table>, bool) {
    if deadline.is_some_and(|d| Instant::now() > d) {
        let checks = t
            .rows
            .iter()
            .map(|r| Check::failed(r.name.clone(), r.anchor, r.tol, "skipped: budget exceeded".into()))
            .collect();
        return (checks, Vec::new(), true);
    }
    let start = Instant::now();
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (t.job)()))
        .unwrap_or_else(|_| Err("check panicked".into()));
    let elapsed = start.elapsed().as_secs_f64();
    let (mut checks, tables): (Vec<Check>, Vec<Table>) = match out {
        Ok(o) if o.values.len() == t.rows.len() => {
            let checks = t
                .rows
                .iter()
                .zip(&o.values)
                .map(|(r, &(lhs, rhs))| Check::compare(r.name.clone(), r.anchor, lhs, rhs, r.tol, o.evals))
                .collect();
            (checks, o.tables)
        }
        Ok(o) => {
            let msg = format!("expected {} values, got {}", t.rows.len(), o.values.len());
            (t.rows.iter().map(|r| Check::failed(r.name.clone(), r.anchor, r.tol, msg.clone())).collect(), o.tables)
        }
        Err(e) => (t.rows.iter().map(|r| Check::failed(r.name.clone(), r.anchor, r.tol, e.clone())).collect(), Vec::new()),
    };
    for c in &mut checks {
        c.wall_time = elapsed;
    }
    (checks, tables, false)
}

/// Runs every check of the configured suite on the current rayon pool.
/// Row order and all values except timings depend only on the configuration.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    cfg.validate()?;
    let chain = cfg.chain_file.as_deref().map(load_chain).transpose()?;
    if let Some(c) = &chain {
        if c.n != 2 {
            return Err(VerifyError::Config(format!("the chain file must describe N = 2, got N = {}", c.n)));
        }
    }
    let mut tasks = Vec::new();
    for s in cfg.suite.members() {
        let mut t = tasks_for(s, cfg.seed, chain.as_ref())?;
        if let Some(tol) = cfg.tolerance(s) {
            for row in t.iter_mut().flat_map(|t| t.rows.iter_mut()).filter(|r| !r.fixed) {
                row.tol = tol;
            }
        }
        tasks.extend(t);
    }
    let start = Instant::now();
    let deadline = cfg.budget.map(|b| start + Duration::from_secs_f64(b));
    let results: Vec<_> = tasks.par_iter().map(|t| run_task(t, deadline)).collect();
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    let mut skipped = 0;
    for (c, t, s) in results {
        if s {
            skipped += c.len();
        }
        checks.extend(c);
        tables.extend(t);
    }
    let mut report = Report::new(cfg.suite.name(), cfg.seed, checks, tables);
    report.summary.wall_time = start.elapsed().as_secs_f64();
    if skipped > 0 {
        report.summary.budget_exceeded = true;
        return Err(VerifyError::BudgetExceeded {
            budget: cfg.budget.unwrap_or(0.0),
            skipped,
            report: Box::new(report),
        });
    }
    Ok(report)
}
