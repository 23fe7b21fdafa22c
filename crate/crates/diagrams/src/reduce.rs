//! Search for a complete reduction of a diagram to a closed form.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::closed::ClosedFormFactor;
use crate::diagram::{Diagram, ExternalVertex, Position, RuleKind, Wave};
use crate::rules::{apply_chain, apply_fourier, apply_star_triangle, apply_triangle_star, find_free_vertices};
use crate::DiagramError;

pub const DEFAULT_MAX_DEPTH: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub rule: RuleKind,
    /// Vertex the rule acted on, or the comma-joined triangle for the inverse star-triangle move.
    pub at: String,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    /// Canonical closed form, including the momentum powers left by external lines.
    pub factor: ClosedFormFactor,
    /// Plane waves that ended on external vertices.
    pub waves: Vec<Wave>,
    pub external: Vec<ExternalVertex>,
    pub steps: Vec<Step>,
}

impl Reduction {
    /// Value of the closed form, with plane waves evaluated at their vertices.
    pub fn eval(&self, bindings: &HashMap<String, Complex64>) -> Result<Complex64, DiagramError> {
        let b = with_points(&self.external, bindings);
        let mut v = self.factor.eval(&b)?;
        for w in &self.waves {
            let z = b.get(&w.vertex).ok_or_else(|| DiagramError::Unbound(w.vertex.clone()))?;
            let p = b.get(&w.momentum).ok_or_else(|| DiagramError::Unbound(w.momentum.clone()))?;
            v *= Complex64::new(0.0, 2.0 * (p * z).re).exp();
        }
        Ok(v)
    }

    pub fn same_as(&self, other: &Reduction, tol: f64) -> bool {
        let key = |r: &Reduction| {
            let mut w: Vec<(String, String)> = r.waves.iter().map(|w| (w.vertex.clone(), w.momentum.clone())).collect();
            w.sort();
            w
        };
        self.factor.approx_eq(&other.factor, tol) && key(self) == key(other)
    }
}

/// Bindings extended by the labels of external points.
pub(crate) fn with_points(external: &[ExternalVertex], bindings: &HashMap<String, Complex64>) -> HashMap<String, Complex64> {
    let mut b = bindings.clone();
    for e in external {
        if let Position::Point(z) = e.position {
            b.entry(e.label.clone()).or_insert(z);
        }
    }
    b
}

/// Reduces `d` with a depth bound of [`DEFAULT_MAX_DEPTH`] rule applications.
pub fn reduce(d: &Diagram) -> Result<Reduction, DiagramError> {
    reduce_with_depth(d, DEFAULT_MAX_DEPTH)
}

/// Iterative deepening over rule applications. Moves are tried in the order
/// chain (free vertices in declaration order), Fourier, star-triangle,
/// triangle-star, so the shortest path found first is deterministic.
pub fn reduce_with_depth(d: &Diagram, max_depth: usize) -> Result<Reduction, DiagramError> {
    d.validate()?;
    let start = d.merge_parallel();
    for depth in start.internal.len()..=max_depth {
        let mut path = Vec::new();
        if let Some(r) = dfs_first(&start, depth, &mut path)? {
            return Ok(r);
        }
    }
    Err(DiagramError::StuckDiagram(Box::new(start)))
}

fn dfs_first(d: &Diagram, left: usize, path: &mut Vec<Step>) -> Result<Option<Reduction>, DiagramError> {
    if d.internal.is_empty() {
        return finish(d, path).map(Some);
    }
    if d.internal.len() > left {
        return Ok(None);
    }
    for (step, next) in moves(d) {
        path.push(step);
        if let Some(r) = dfs_first(&next, left - 1, path)? {
            return Ok(Some(r));
        }
        path.pop();
    }
    Ok(None)
}

/// Every terminating rule sequence of length at most `max_depth`, stopping
/// after `max_paths` complete paths.
pub fn enumerate_reductions(d: &Diagram, max_depth: usize, max_paths: usize) -> Result<Vec<Reduction>, DiagramError> {
    d.validate()?;
    let start = d.merge_parallel();
    let mut out = Vec::new();
    let mut path = Vec::new();
    dfs_all(&start, max_depth, &mut path, &mut out, max_paths)?;
    Ok(out)
}

fn dfs_all(
    d: &Diagram,
    left: usize,
    path: &mut Vec<Step>,
    out: &mut Vec<Reduction>,
    max_paths: usize,
) -> Result<(), DiagramError> {
    if out.len() >= max_paths {
        return Ok(());
    }
    if d.internal.is_empty() {
        out.push(finish(d, path)?);
        return Ok(());
    }
    if d.internal.len() > left {
        return Ok(());
    }
    for (step, next) in moves(d) {
        path.push(step);
        dfs_all(&next, left - 1, path, out, max_paths)?;
        path.pop();
    }
    Ok(())
}

fn moves(d: &Diagram) -> Vec<(Step, Diagram)> {
    let mut out = Vec::new();
    for v in find_free_vertices(d) {
        let inc = d.incident(&v);
        let mut c = d.clone();
        if c.edges[inc[0]].to != v {
            c = c.reverse_edge(inc[0]);
        }
        if c.edges[inc[1]].from != v {
            c = c.reverse_edge(inc[1]);
        }
        if let Ok(n) = apply_chain(&c, &v) {
            out.push((step(RuleKind::Chain, &v), n));
        }
    }
    for v in &d.internal {
        if !d.waves_at(v).is_empty() {
            if let Ok(n) = apply_fourier(d, v) {
                out.push((step(RuleKind::Fourier, v), n));
            }
        }
    }
    for v in &d.internal {
        if d.degree(v) == 3 {
            if let Ok(n) = apply_star_triangle(d, v) {
                out.push((step(RuleKind::StarTriangle, v), n));
            }
        }
    }
    let verts: Vec<&str> = d
        .internal
        .iter()
        .map(|s| s.as_str())
        .chain(d.external.iter().map(|e| e.label.as_str()))
        .collect();
    let ni = d.internal.len();
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            if d.edge_between(verts[i], verts[j]).is_none() {
                continue;
            }
            for k in (j + 1)..verts.len() {
                if i >= ni {
                    break;
                }
                let tri = [verts[i], verts[j], verts[k]];
                if let Ok((n, _)) = apply_triangle_star(d, tri) {
                    out.push((step(RuleKind::StarTriangle, &tri.join(",")), n));
                }
            }
        }
    }
    out
}

fn step(rule: RuleKind, at: &str) -> Step {
    Step {
        rule,
        at: at.to_string(),
    }
}

/// Name of an external vertex for momentum powers; `None` for a point at the origin.
fn symbol_of(d: &Diagram, v: &str) -> Result<Option<String>, DiagramError> {
    let e = d
        .external
        .iter()
        .find(|e| e.label == v)
        .ok_or_else(|| DiagramError::UnknownVertex(v.to_string()))?;
    Ok(match &e.position {
        Position::Momentum(s) => Some(s.clone()),
        Position::Point(z) if z.norm() == 0.0 => None,
        Position::Point(_) => Some(e.label.clone()),
    })
}

fn finish(d: &Diagram, path: &[Step]) -> Result<Reduction, DiagramError> {
    let mut f = d.prefactor.clone();
    for e in &d.edges {
        match (symbol_of(d, &e.from)?, symbol_of(d, &e.to)?) {
            (None, Some(t)) => f = f.times_momentum(&t, e.alpha),
            (Some(s), None) => f = f.times_parity(e.alpha.m()).times_momentum(&s, e.alpha),
            (Some(s), Some(t)) if t < s => f = f.times_momentum(&format!("{t}-{s}"), e.alpha),
            (Some(s), Some(t)) => f = f.times_parity(e.alpha.m()).times_momentum(&format!("{s}-{t}"), e.alpha),
            (None, None) => return Err(DiagramError::Invalid(format!("edge {}-{} joins two origins", e.from, e.to))),
        }
    }
    Ok(Reduction {
        factor: f.canonical(),
        waves: d.waves.clone(),
        external: d.external.clone(),
        steps: path.to_vec(),
    })
}
