use std::collections::HashMap;

use cfield::{c64, FieldExponent};
use diagrams::{apply_chain, apply_exchange, apply_fourier, apply_star_triangle, numeric_eval, Diagram, DiagramError, ExchangePattern, Position};
use num_complex::Complex64;
use plane::{IntegralEstimate, PlaneError, QuadratureSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Outcome, Row, Task};

pub(crate) const INSTANCES: usize = 20;
const TOL: f64 = 1e-3;
const MIN_SEPARATION: f64 = 0.3;

fn ex(m: i32, re: f64, im: f64) -> FieldExponent {
    FieldExponent::from_mw(m, c64(re, im))
}

fn exponent(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> FieldExponent {
    let m = rng.gen_range(-1..=1);
    ex(m, rng.gen_range(lo..hi), rng.gen_range(-0.4..0.4))
}

fn point(rng: &mut ChaCha8Rng) -> Position {
    Position::Point(c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `n` points at least `MIN_SEPARATION` apart.
fn separated(rng: &mut ChaCha8Rng, n: usize) -> Vec<Position> {
    loop {
        let ps: Vec<Complex64> = (0..n).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let ok = ps.iter().enumerate().all(|(i, p)| ps[..i].iter().all(|q| (p - q).norm() >= MIN_SEPARATION));
        if ok {
            return ps.into_iter().map(Position::Point).collect();
        }
    }
}

fn star(a: FieldExponent, b: FieldExponent, g: FieldExponent, rng: &mut ChaCha8Rng) -> Diagram {
    let zs = separated(rng, 3);
    Diagram::new()
        .with_external("z1", zs[0].clone())
        .with_external("z2", zs[1].clone())
        .with_external("z3", zs[2].clone())
        .with_internal("w")
        .with_edge("w", "z1", a)
        .with_edge("w", "z2", b)
        .with_edge("w", "z3", g)
}

fn unique_triple(rng: &mut ChaCha8Rng) -> (FieldExponent, FieldExponent, FieldExponent) {
    let a = exponent(rng, 0.55, 0.75);
    let b = exponent(rng, 0.55, 0.75);
    (a, b, ex(0, 2.0, 0.0) - a - b)
}

fn pattern(z0: Option<&str>) -> ExchangePattern {
    ExchangePattern {
        w: "w".into(),
        z1: "z1".into(),
        z2: "z2".into(),
        z0: z0.map(String::from),
    }
}

/// Evaluates at the suite tolerance, retrying once with tighter targets when
/// the adaptive rule stops short of its own.
fn numeric(d: &Diagram, b: &HashMap<String, Complex64>) -> Result<IntegralEstimate, String> {
    let quad = QuadratureSpec::default().with_tol(1e-7, 1e-4);
    match numeric_eval(d, b, &quad) {
        Err(DiagramError::Plane(PlaneError::NotConverged(_))) => numeric_eval(d, b, &quad.with_tol(1e-8, 1e-5)),
        r => r,
    }
    .map_err(|e| e.to_string())
}

type Build = Result<(Diagram, Diagram, HashMap<String, Complex64>), diagrams::DiagramError>;

fn two_sided(name: String, anchor: &'static str, build: Build) -> Task {
    Task::single(Row::new(name, anchor, TOL), move || {
        let (before, after, b) = build.clone().map_err(|e| e.to_string())?;
        let l = numeric(&before, &b)?;
        let r = numeric(&after, &b)?;
        Ok(Outcome::one(l.value, r.value, (l.evals + r.evals) as u64))
    })
}

pub(crate) fn tasks(rng: &mut ChaCha8Rng) -> Vec<Task> {
    let mut out = Vec::new();
    for k in 0..INSTANCES {
        let (a, b) = (exponent(rng, 0.62, 0.88), exponent(rng, 0.62, 0.88));
        let zs = separated(rng, 2);
        let d = Diagram::new()
            .with_external("z1", zs[0].clone())
            .with_external("z2", zs[1].clone())
            .with_internal("w")
            .with_edge("w", "z1", a)
            .with_edge("z2", "w", b);
        let build = apply_chain(&d, "w").map(|r| (d, r, HashMap::new()));
        out.push(two_sided(format!("rules.chain.{k:02}"), "chain relation", build));
    }
    for k in 0..INSTANCES {
        let a = exponent(rng, 0.3, 0.8);
        let d = Diagram::new()
            .with_external("o", point(rng))
            .with_internal("w")
            .with_edge("o", "w", a)
            .with_wave("w", "p");
        let p = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let build = apply_fourier(&d, "w").map(|r| (d, r, [("p".to_string(), p)].into()));
        out.push(two_sided(format!("rules.fourier.{k:02}"), "propagator Fourier transform", build));
    }
    for k in 0..INSTANCES {
        let (a, b, g) = unique_triple(rng);
        let d = star(a, b, g, rng);
        let build = apply_star_triangle(&d, "w").map(|r| (d, r, HashMap::new()));
        out.push(two_sided(format!("rules.star-triangle.{k:02}"), "star-triangle relation", build));
    }
    for k in 0..INSTANCES {
        let delta = |rng: &mut ChaCha8Rng| ex(rng.gen_range(-1..=1), rng.gen_range(-0.05..0.05), rng.gen_range(-0.3..0.3));
        let build = if k % 3 == 2 {
            let (a, b) = (exponent(rng, 0.55, 0.8), exponent(rng, 0.55, 0.8));
            let zs = separated(rng, 2);
            let d = Diagram::new()
                .with_external("z1", zs[0].clone())
                .with_external("z2", zs[1].clone())
                .with_internal("w")
                .with_edge("w", "z1", a)
                .with_edge("w", "z2", b);
            let dl = delta(rng);
            apply_exchange(&d, &pattern(None), (a + dl, b - dl)).map(|r| (d, r, HashMap::new()))
        } else {
            let (a, b, g) = unique_triple(rng);
            let mut d = star(a, b, g, rng);
            if k % 3 == 0 {
                d = d
                    .with_edge("z3", "z2", exponent(rng, 0.2, 0.6))
                    .with_edge("z1", "z3", exponent(rng, 0.2, 0.6));
            }
            let dl = delta(rng);
            apply_exchange(&d, &pattern(Some("z3")), (a + dl, b - dl)).map(|r| (d, r, HashMap::new()))
        };
        out.push(two_sided(format!("rules.exchange.{k:02}"), "exchange relation", build));
    }
    out
}
