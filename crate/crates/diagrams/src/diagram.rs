use cfield::FieldExponent;
use num_complex::Complex64;

use crate::closed::{ClosedFormFactor, MERGE_TOL};
use crate::DiagramError;

#[derive(Clone, Debug, PartialEq)]
pub enum Position {
    Point(Complex64),
    Momentum(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalVertex {
    pub label: String,
    pub position: Position,
}

/// `D_α(to − from)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub alpha: FieldExponent,
}

/// Plane wave `e^{i(p v + p̄ v̄)}` attached to vertex `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Wave {
    pub vertex: String,
    pub momentum: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Diagram {
    pub external: Vec<ExternalVertex>,
    pub internal: Vec<String>,
    pub edges: Vec<Edge>,
    pub waves: Vec<Wave>,
    pub prefactor: ClosedFormFactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Chain,
    StarTriangle,
    Fourier,
    Exchange,
}

impl Diagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_external(mut self, label: &str, position: Position) -> Self {
        self.external.push(ExternalVertex {
            label: label.to_string(),
            position,
        });
        self
    }

    pub fn with_internal(mut self, label: &str) -> Self {
        self.internal.push(label.to_string());
        self
    }

    /// Adds `D_α(to − from)`.
    pub fn with_edge(mut self, from: &str, to: &str, alpha: FieldExponent) -> Self {
        self.edges.push(Edge {
            from: from.to_string(),
            to: to.to_string(),
            alpha,
        });
        self
    }

    pub fn with_wave(mut self, vertex: &str, momentum: &str) -> Self {
        self.waves.push(Wave {
            vertex: vertex.to_string(),
            momentum: momentum.to_string(),
        });
        self
    }

    pub fn with_prefactor(mut self, f: ClosedFormFactor) -> Self {
        self.prefactor = f;
        self
    }

    pub fn is_internal(&self, v: &str) -> bool {
        self.internal.iter().any(|x| x == v)
    }

    pub fn is_external(&self, v: &str) -> bool {
        self.external.iter().any(|x| x.label == v)
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.is_internal(v) || self.is_external(v)
    }

    /// Checks that edges reference known vertices and that there are no self-loops.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut seen = std::collections::HashSet::new();
        for v in self.internal.iter().chain(self.external.iter().map(|e| &e.label)) {
            if !seen.insert(v.as_str()) {
                return Err(DiagramError::Invalid(format!("duplicate vertex {v}")));
            }
        }
        for e in &self.edges {
            for v in [&e.from, &e.to] {
                if !self.has_vertex(v) {
                    return Err(DiagramError::UnknownVertex(v.clone()));
                }
            }
            if e.from == e.to {
                return Err(DiagramError::Invalid(format!("self-loop at {}", e.from)));
            }
        }
        for w in &self.waves {
            if !self.has_vertex(&w.vertex) {
                return Err(DiagramError::UnknownVertex(w.vertex.clone()));
            }
        }
        Ok(())
    }

    pub fn incident(&self, v: &str) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == v || e.to == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degree(&self, v: &str) -> usize {
        self.incident(v).len()
    }

    pub fn waves_at(&self, v: &str) -> Vec<usize> {
        self.waves
            .iter()
            .enumerate()
            .filter(|(_, w)| w.vertex == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn edge_between(&self, u: &str, v: &str) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.from == u && e.to == v) || (e.from == v && e.to == u))
    }

    /// Flips edge `i`, using `D_α(−z) = (−1)^m D_α(z)`.
    pub fn reverse_edge(&self, i: usize) -> Diagram {
        let mut d = self.clone();
        let e = &mut d.edges[i];
        std::mem::swap(&mut e.from, &mut e.to);
        d.prefactor = d.prefactor.times_parity(e.alpha.m());
        d
    }

    /// Index of edge `i` read as `D(to − from)` with the given endpoints,
    /// together with the sign picked up by reorienting it.
    pub(crate) fn oriented(&self, i: usize, from: &str, to: &str) -> (FieldExponent, i32) {
        let e = &self.edges[i];
        if e.from == from && e.to == to {
            (e.alpha, 1)
        } else {
            (e.alpha, if e.alpha.m().rem_euclid(2) == 0 { 1 } else { -1 })
        }
    }

    /// Merges parallel edges (`D_α D_β = D_{α+β}`) and drops zero-index edges.
    pub fn merge_parallel(&self) -> Diagram {
        let mut d = self.clone();
        let mut out: Vec<Edge> = Vec::new();
        for e in &self.edges {
            if let Some(f) = out
                .iter_mut()
                .find(|f| (f.from == e.from && f.to == e.to) || (f.from == e.to && f.to == e.from))
            {
                if f.from != e.from {
                    d.prefactor = d.prefactor.times_parity(e.alpha.m());
                }
                f.alpha = f.alpha + e.alpha;
            } else {
                out.push(e.clone());
            }
        }
        out.retain(|e| !e.alpha.is_zero(MERGE_TOL));
        d.edges = out;
        d
    }

    pub(crate) fn remove_internal(&mut self, v: &str) {
        self.internal.retain(|x| x != v);
    }

    pub(crate) fn fresh_label(&self, stem: &str) -> String {
        let mut k = 1;
        loop {
            let l = format!("{stem}{k}");
            if !self.has_vertex(&l) {
                return l;
            }
            k += 1;
        }
    }
}

pub(crate) fn other_end<'a>(e: &'a Edge, v: &str) -> &'a str {
    if e.from == v {
        &e.to
    } else {
        &e.from
    }
}
