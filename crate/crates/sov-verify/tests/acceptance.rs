//! Acceptance criteria 1 to 8, one line each.

use std::process::ExitCode;
use std::time::Instant;

use sov_verify::{run_suite, Check, Report, Suite, SuiteConfig};

const SEED: u64 = 20240611;

const GAMMA_SECONDS: f64 = 5.0;
const RULES_SECONDS: f64 = 600.0;
const GUSTAFSON_SECONDS: f64 = 1200.0;

const GAMMA_TOL: f64 = 1e-12;
const GAMMA_DRAWS: u64 = 1000;
const RULE_TOL: f64 = 1e-3;
const RULE_COUNT: usize = 20;
const REDUCE_QUAD_TOL: f64 = 1e-3;
const EIGEN_CONFIGS: usize = 10;
const TRANSLATION_TOL: f64 = 1e-4;
const B_TOL: f64 = 1e-3;
const ANNIHILATION_TOL: f64 = 1e-3;
const BB_FORMS_TOL: f64 = 1e-10;
const MIXED_TOL: f64 = 1e-3;
const GI_N1_TOL: f64 = 1e-6;
const GI_N2_TOL: f64 = 1e-4;
const GII_N1_TOL: f64 = 1e-6;
const J_OMEGA_TOL: f64 = 1e-4;
const C1_TOL: f64 = 1e-15;

fn run(suite: Suite) -> (Report, f64) {
    let mut cfg = SuiteConfig::new(suite);
    cfg.seed = SEED;
    let start = Instant::now();
    let report = run_suite(&cfg).unwrap_or_else(|e| panic!("{suite} suite did not run: {e}"));
    (report, start.elapsed().as_secs_f64())
}

fn with_prefix<'a>(r: &'a Report, prefix: &str) -> Vec<&'a Check> {
    r.checks.iter().filter(|c| c.name.starts_with(prefix)).collect()
}

/// Every check with `prefix` passes within `tol`; returns the count and the worst error.
fn group(r: &Report, prefix: &str, tol: f64) -> (bool, usize, f64) {
    let cs = with_prefix(r, prefix);
    let worst = cs.iter().map(|c| if c.rhs.norm() > 0.0 { c.rel_err } else { c.abs_err }).fold(0.0, f64::max);
    let ok = !cs.is_empty() && cs.iter().all(|c| c.pass && c.tol <= tol);
    (ok, cs.len(), worst)
}

fn failures(r: &Report, prefix: &str) -> Vec<String> {
    with_prefix(r, prefix)
        .into_iter()
        .filter(|c| !c.pass)
        .map(|c| match &c.error {
            Some(e) => format!("{} ({e})", c.name),
            None => format!("{} (rel {:.2e}, tol {:.0e})", c.name, c.rel_err, c.tol),
        })
        .collect()
}

struct Criterion {
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

fn criterion(groups: &[(&Report, &str, f64)], extra: Option<(bool, String)>) -> Criterion {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut fails = Vec::new();
    for &(r, prefix, tol) in groups {
        let (ok, n, worst) = group(r, prefix, tol);
        pass &= ok;
        parts.push(format!("{prefix} {n} checks worst {worst:.1e}"));
        fails.extend(failures(r, prefix));
    }
    if let Some((ok, d)) = extra {
        pass &= ok;
        parts.push(d);
    }
    Criterion {
        pass,
        detail: parts.join("; "),
        failures: fails,
    }
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let (gamma, t_gamma) = run(Suite::Gamma);
    let (rules, t_rules) = run(Suite::Rules);
    let (scalar, _) = run(Suite::ScalarProducts);
    let (eigen, _) = run(Suite::Eigen);
    let (gus, t_gus) = run(Suite::Gustafson);

    let mut results = Vec::new();

    let draws = with_prefix(&gamma, "gamma.recurrence").first().map_or(0, |c| c.evals);
    results.push(criterion(
        &[(&gamma, "gamma.recurrence", GAMMA_TOL), (&gamma, "gamma.reflection", GAMMA_TOL)],
        Some((
            t_gamma < GAMMA_SECONDS && draws >= GAMMA_DRAWS,
            format!("{draws} draws in {t_gamma:.2} s"),
        )),
    ));

    let kinds = ["rules.chain.", "rules.fourier.", "rules.star-triangle.", "rules.exchange."];
    let enough = kinds.iter().all(|k| with_prefix(&rules, k).len() >= RULE_COUNT);
    let groups: Vec<_> = kinds.iter().map(|k| (&rules, *k, RULE_TOL)).collect();
    results.push(criterion(&groups, Some((enough && t_rules < RULES_SECONDS, format!("{t_rules:.1} s")))));

    let has_n3 = !with_prefix(&scalar, "reduce.bb_n3").is_empty();
    results.push(criterion(
        &[
            (&scalar, "reduce.bb_n2", REDUCE_QUAD_TOL),
            (&scalar, "reduce.bb_n3", REDUCE_QUAD_TOL),
        ],
        Some((
            has_n3 && !with_prefix(&scalar, "reduce.bb_n2.0.quadrature").is_empty(),
            "closed forms, confluence, sign and quadrature".into(),
        )),
    ));

    let configs = with_prefix(&eigen, "eigen.").len() / 3;
    let mut c4 = criterion(&[], Some((configs >= EIGEN_CONFIGS, format!("{configs} configurations"))));
    for (suffix, tol) in [(".translation", TRANSLATION_TOL), (".b_operator", B_TOL), (".annihilation", ANNIHILATION_TOL)] {
        let cs: Vec<_> = eigen.checks.iter().filter(|c| c.name.ends_with(suffix)).collect();
        let worst = cs.iter().map(|c| if c.rhs.norm() > 0.0 { c.rel_err } else { c.abs_err }).fold(0.0, f64::max);
        c4.pass &= cs.len() >= EIGEN_CONFIGS && cs.iter().all(|c| c.pass && c.tol <= tol);
        c4.detail.push_str(&format!("; {} worst {worst:.1e}", &suffix[1..]));
        c4.failures.extend(cs.iter().filter(|c| !c.pass).map(|c| c.name.clone()));
    }
    results.push(c4);

    results.push(criterion(
        &[
            (&scalar, "scalar.bb_forms", BB_FORMS_TOL),
            (&scalar, "scalar.ab_n1", MIXED_TOL),
            (&scalar, "scalar.mixed_n1", MIXED_TOL),
        ],
        None,
    ));

    let monotone = gus.tables.len() >= 8 && gus.tables.iter().all(|t| t.monotone);
    results.push(criterion(
        &[
            (&gus, "gustafson.first_n1.sigma", GI_N1_TOL),
            (&gus, "gustafson.first_n1.real", GI_N1_TOL),
            (&gus, "gustafson.first_n2.sigma", GI_N2_TOL),
            (&gus, "gustafson.second_n1.", GII_N1_TOL),
            (&gus, "gustafson.j_omega_n2", J_OMEGA_TOL),
            (&gus, "gustafson.second_n2.", GI_N2_TOL),
        ],
        Some((
            monotone && t_gus < GUSTAFSON_SECONDS,
            format!("{} tables monotone {monotone}; {t_gus:.1} s", gus.tables.len()),
        )),
    ));

    results.push(criterion(
        &[(&scalar, "measure.", 1.0), (&scalar, "constants.", C1_TOL)],
        None,
    ));

    let pairing = scalar.tables.iter().find(|t| t.name == "epsilon.pairing");
    results.push(criterion(
        &[(&scalar, "epsilon.", 1e-15)],
        Some((
            pairing.is_some_and(|t| t.monotone && t.rows.len() >= 4),
            format!("{} Cauchy differences", pairing.map_or(0, |t| t.rows.len())),
        )),
    ));

    let mut all = true;
    for (k, c) in results.iter().enumerate() {
        all &= c.pass;
        println!("criterion {}: {} ({})", k + 1, if c.pass { "PASS" } else { "FAIL" }, c.detail);
        for f in &c.failures {
            println!("    failed: {f}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
