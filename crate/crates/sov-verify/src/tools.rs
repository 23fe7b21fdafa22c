//! `reduce` and `eval` subcommands.

use std::collections::HashMap;
use std::path::Path;

use diagrams::json::{diagram_from_json, factor_to_json};
use num_complex::Complex64;
use plane::{IntegralEstimate, QuadratureSpec};
use serde::{Deserialize, Serialize};
use sov::{phi_position_eval, psi_position_eval, ChainSpec, EigenfunctionSpec, SeparatedPoint};

use crate::VerifyError;

pub fn load_chain(path: &Path) -> Result<ChainSpec, VerifyError> {
    let text = std::fs::read_to_string(path).map_err(|e| VerifyError::io(path, e))?;
    let chain: ChainSpec = serde_json::from_str(&text)?;
    chain.validate()?;
    Ok(chain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalFunction {
    Psi,
    Phi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatedJson {
    pub n2: i32,
    pub nu: Complex64,
}

/// Evaluation point: `z` coordinates, separated variables, and the momentum for Ψ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub z: Vec<Complex64>,
    pub x: Vec<SeparatedJson>,
    #[serde(default)]
    pub p: Option<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub function: String,
    pub value: Complex64,
    pub err: f64,
    pub evals: usize,
    pub converged: bool,
}

pub fn eval_point(f: EvalFunction, chain: &ChainSpec, point: &EvalPoint) -> Result<EvalOutput, VerifyError> {
    let xs: Vec<SeparatedPoint> = point.x.iter().map(|x| SeparatedPoint::new(x.n2, x.nu)).collect();
    let quad = QuadratureSpec::default();
    let est: IntegralEstimate = match f {
        EvalFunction::Psi => {
            let p = point.p.ok_or_else(|| VerifyError::Config("Ψ needs a momentum \"p\" in the point file".into()))?;
            psi_position_eval(&EigenfunctionSpec::b(chain.clone(), p, xs), &point.z, &quad)?
        }
        EvalFunction::Phi => phi_position_eval(&EigenfunctionSpec::a(chain.clone(), xs), &point.z, &quad)?,
    };
    Ok(EvalOutput {
        function: format!("{f:?}").to_lowercase(),
        value: est.value,
        err: est.err,
        evals: est.evals,
        converged: est.converged,
    })
}

/// Reduces a diagram given as JSON; returns the reduced form as JSON.
pub fn reduce_diagram(json: &str) -> Result<String, VerifyError> {
    let d = diagram_from_json(json)?;
    let r = diagrams::reduce(&d)?;
    let factor: serde_json::Value = serde_json::from_str(&factor_to_json(&r.factor)?)?;
    let value = r.eval(&HashMap::new()).ok();
    let out = serde_json::json!({
        "factor": factor,
        "value": value,
        "waves": r.waves.iter().map(|w| serde_json::json!({"vertex": w.vertex, "momentum": w.momentum})).collect::<Vec<_>>(),
        "steps": r.steps.iter().map(|s| serde_json::json!({"rule": format!("{:?}", s.rule), "at": s.at})).collect::<Vec<_>>(),
    });
    Ok(serde_json::to_string_pretty(&out)?)
}
