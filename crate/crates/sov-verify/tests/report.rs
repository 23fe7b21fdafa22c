use std::collections::BTreeMap;

use serde_json::Value;
use sov_verify::{render_text, run_suite, Report, Suite, SuiteConfig, VerifyError};

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn config(suite: Suite, seed: u64) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(suite);
    cfg.seed = seed;
    cfg
}

#[test]
fn unknown_suite_is_a_config_error() {
    assert!(matches!("quantum".parse::<Suite>(), Err(VerifyError::Config(_))));
    for s in ["gamma", "rules", "scalar-products", "eigen", "gustafson", "all"] {
        assert_eq!(s.parse::<Suite>().unwrap().name(), s);
    }
}

#[test]
fn empty_report_is_valid_json() {
    let r = Report::new("gamma", 3, Vec::new(), Vec::new());
    let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(v["summary"]["total"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    assert!(r.all_pass());
}

#[test]
fn report_round_trips_through_json() {
    let r = run_suite(&config(Suite::Gamma, 11)).unwrap();
    let back = Report::from_json(&r.to_json().unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_json().unwrap(), r.to_json().unwrap());
}

#[test]
fn same_seed_gives_identical_json_modulo_timing() {
    let json = |seed| {
        let mut v: Value = serde_json::from_str(&run_suite(&config(Suite::Gamma, seed)).unwrap().to_json().unwrap()).unwrap();
        strip_timing(&mut v);
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(json(5), json(5));
    assert_ne!(json(5), json(6));
}

#[test]
fn gamma_rows_carry_every_field() {
    let r = run_suite(&config(Suite::Gamma, 0)).unwrap();
    assert_eq!(r.summary.total, r.checks.len());
    assert_eq!(r.summary.passed + r.summary.failed, r.summary.total);
    let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    let row = &v["checks"][0];
    for key in ["name", "paper_anchor", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "evals", "wall_time"] {
        assert!(row.get(key).is_some(), "missing {key}");
    }
    assert!(r.all_pass(), "{}", render_text(&r));
}

#[test]
fn gustafson_n1_defaults_meet_their_tolerance() {
    let r = run_suite(&config(Suite::Gustafson, 0)).unwrap();
    let first: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with("gustafson.first_n1.")).collect();
    assert!(!first.is_empty());
    for c in first {
        assert!(c.rel_err <= 1e-6, "{} {}", c.name, c.rel_err);
    }
}

#[test]
fn tolerance_overrides_apply_and_are_validated() {
    let mut cfg = config(Suite::Gamma, 0);
    cfg.tolerances = BTreeMap::from([("gamma".to_string(), 1e-30)]);
    let r = run_suite(&cfg).unwrap();
    assert!(r.checks.iter().all(|c| c.tol == 1e-30));
    assert!(!r.all_pass());

    for (k, v) in [("gamma", -1.0), ("gamma", f64::NAN), ("nonsense", 1e-3)] {
        let mut cfg = config(Suite::Gamma, 0);
        cfg.tolerances = BTreeMap::from([(k.to_string(), v)]);
        assert!(matches!(run_suite(&cfg), Err(VerifyError::Config(_))), "{k} {v}");
    }
}

#[test]
fn missing_or_wrong_chain_file_is_a_config_error() {
    let mut cfg = config(Suite::Eigen, 0);
    cfg.chain_file = Some("/nonexistent/chain.json".into());
    assert!(matches!(run_suite(&cfg), Err(VerifyError::Config(_))));

    let path = std::env::temp_dir().join(format!("sov-verify-chain-n3-{}.json", std::process::id()));
    let chain = r#"{"N": 3, "spins": [{"n2": 0, "rho": 0.1}, {"n2": 0, "rho": 0.1}, {"n2": 0, "rho": 0.1}],
        "impurities": [{"re": 0.0, "im": 0.0}, {"re": 0.1, "im": 0.0}, {"re": -0.1, "im": 0.0}]}"#;
    std::fs::write(&path, chain).unwrap();
    cfg.chain_file = Some(path.clone());
    let r = run_suite(&cfg);
    std::fs::remove_file(&path).unwrap();
    assert!(matches!(r, Err(VerifyError::Config(_))));
}

#[test]
fn tiny_budget_skips_checks_and_keeps_the_partial_report() {
    let mut cfg = config(Suite::Gustafson, 0);
    cfg.budget = Some(1e-9);
    match run_suite(&cfg) {
        Err(VerifyError::BudgetExceeded { skipped, report, .. }) => {
            assert!(skipped > 0);
            assert!(report.summary.budget_exceeded);
            assert!(!report.all_pass());
            let c = report.checks.iter().find(|c| c.error.is_some()).unwrap();
            assert!(!c.pass);
            assert_eq!(c.rel_err, f64::MAX);
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
}

#[test]
fn text_rendering_lists_every_check() {
    let r = run_suite(&config(Suite::Gamma, 2)).unwrap();
    let t = render_text(&r);
    for c in &r.checks {
        assert!(t.contains(&c.name));
    }
    assert!(t.contains("checks,"));
}
