//! Integral identities for propagators, as rewrites of a diagram.
//!
//! Index layout (edges read as `D_α(to − from)`):
//! - chain: `∫ D_α(z1 − w) D_β(w − z2) = π a(α)a(β)/a(γ) D_γ(z1 − z2)`, `γ = α+β−1`;
//! - star-triangle, `α+β+γ = 2`:
//!   `∫ D_α(z1 − w) D_β(z2 − w) D_γ(z3 − w)
//!    = π a(α)a(β)a(γ) D_{1−γ}(z1 − z2) D_{1−α}(z2 − z3) D_{1−β}(z3 − z1)`;
//! - Fourier: `∫ e^{i(pw+p̄w̄)} D_α(w − z) = e^{i(pz+p̄z̄)} π i^{[α]} a(α) D_{1−α}(p)`;
//! - exchange: see [`apply_exchange`].

use cfield::{c64, FieldExponent};

use crate::closed::MERGE_TOL;
use crate::diagram::{other_end, Diagram, Edge};
use crate::DiagramError;

fn one() -> FieldExponent {
    FieldExponent::scalar(c64(1.0, 0.0))
}

/// Internal vertices with exactly two incident propagators and no plane wave.
pub fn find_free_vertices(d: &Diagram) -> Vec<String> {
    d.internal
        .iter()
        .filter(|v| d.degree(v) == 2 && d.waves_at(v).is_empty())
        .cloned()
        .collect()
}

fn require_internal(d: &Diagram, v: &str) -> Result<(), DiagramError> {
    if d.is_internal(v) {
        Ok(())
    } else if d.is_external(v) {
        Err(DiagramError::NotInternal(v.to_string()))
    } else {
        Err(DiagramError::UnknownVertex(v.to_string()))
    }
}

/// Integrates a free vertex `v` with one incoming and one outgoing edge.
pub fn apply_chain(d: &Diagram, v: &str) -> Result<Diagram, DiagramError> {
    require_internal(d, v)?;
    let inc = d.incident(v);
    if inc.len() != 2 || !d.waves_at(v).is_empty() {
        return Err(DiagramError::NotAChain(v.to_string()));
    }
    let (e1, e2) = (&d.edges[inc[0]], &d.edges[inc[1]]);
    let (ein, eout) = if e1.to == v && e2.from == v {
        (e1, e2)
    } else if e2.to == v && e1.from == v {
        (e2, e1)
    } else {
        return Err(DiagramError::NotAChain(v.to_string()));
    };
    let z2 = ein.from.clone();
    let z1 = eout.to.clone();
    if z1 == z2 {
        return Err(DiagramError::NotAChain(v.to_string()));
    }
    let (beta, alpha) = (ein.alpha, eout.alpha);
    let gamma = alpha + beta - one();
    if gamma.a().norm() < MERGE_TOL || gamma.abar().norm() < MERGE_TOL {
        return Err(DiagramError::DegenerateChain(v.to_string()));
    }
    let mut out = d.clone();
    out.edges = d
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !inc.contains(i))
        .map(|(_, e)| e.clone())
        .collect();
    out.edges.push(Edge {
        from: z2,
        to: z1,
        alpha: gamma,
    });
    out.remove_internal(v);
    out.prefactor = out.prefactor.times_pi(1).times_a(alpha).times_a(beta).times_gamma(gamma, 1);
    Ok(out.merge_parallel())
}

/// Replaces a unique star at `v` by a triangle on its three neighbours.
pub fn apply_star_triangle(d: &Diagram, v: &str) -> Result<Diagram, DiagramError> {
    require_internal(d, v)?;
    let inc = d.incident(v);
    if inc.len() != 3 || !d.waves_at(v).is_empty() {
        return Err(DiagramError::WrongDegree(v.to_string()));
    }
    let zs: Vec<String> = inc.iter().map(|&i| other_end(&d.edges[i], v).to_string()).collect();
    if zs[0] == zs[1] || zs[1] == zs[2] || zs[0] == zs[2] {
        return Err(DiagramError::WrongDegree(v.to_string()));
    }
    let mut sign = 1;
    let mut idx = Vec::new();
    for (&i, z) in inc.iter().zip(&zs) {
        let (a, s) = d.oriented(i, v, z);
        sign *= s;
        idx.push(a);
    }
    let sum = idx[0] + idx[1] + idx[2];
    if sum.m() != 0 || (sum.w() - c64(2.0, 0.0)).norm() > MERGE_TOL {
        return Err(DiagramError::UniquenessViolated(sum.a(), sum.abar()));
    }
    let (al, be, ga) = (idx[0], idx[1], idx[2]);
    let mut out = d.clone();
    out.edges = d
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !inc.contains(i))
        .map(|(_, e)| e.clone())
        .collect();
    let (z1, z2, z3) = (&zs[0], &zs[1], &zs[2]);
    for (from, to, a) in [(z2, z1, ga.reflect()), (z3, z2, al.reflect()), (z1, z3, be.reflect())] {
        out.edges.push(Edge {
            from: from.clone(),
            to: to.clone(),
            alpha: a,
        });
    }
    out.remove_internal(v);
    out.prefactor = out.prefactor.times_sign(sign).times_pi(1).times_a(al).times_a(be).times_a(ga);
    Ok(out.merge_parallel())
}

/// Inverse of the star-triangle relation: a triangle on `(z1, z2, z3)` whose
/// indices sum to 1 becomes a star around a new internal vertex.
pub fn apply_triangle_star(d: &Diagram, tri: [&str; 3]) -> Result<(Diagram, String), DiagramError> {
    let [z1, z2, z3] = tri;
    let find = |u: &str, v: &str| d.edge_between(u, v).ok_or_else(|| DiagramError::NotATriangle(format!("{u}-{v}")));
    let (i12, i23, i31) = (find(z1, z2)?, find(z2, z3)?, find(z3, z1)?);
    let (g12, s1) = d.oriented(i12, z2, z1);
    let (g23, s2) = d.oriented(i23, z3, z2);
    let (g31, s3) = d.oriented(i31, z1, z3);
    let sum = g12 + g23 + g31;
    if sum.m() != 0 || (sum.w() - c64(1.0, 0.0)).norm() > MERGE_TOL {
        return Err(DiagramError::UniquenessViolated(sum.a(), sum.abar()));
    }
    let (ga, al, be) = (g12.reflect(), g23.reflect(), g31.reflect());
    let w = d.fresh_label("s");
    let mut out = d.clone();
    out.edges = d
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| ![i12, i23, i31].contains(i))
        .map(|(_, e)| e.clone())
        .collect();
    for (z, a) in [(z1, al), (z2, be), (z3, ga)] {
        out.edges.push(Edge {
            from: w.clone(),
            to: z.to_string(),
            alpha: a,
        });
    }
    out.internal.push(w.clone());
    out.prefactor = out
        .prefactor
        .times_sign(s1 * s2 * s3)
        .times_pi(-1)
        .times_gamma(al, 1)
        .times_gamma(be, 1)
        .times_gamma(ga, 1);
    Ok((out.merge_parallel(), w))
}

/// Integrates a vertex carrying a plane wave and a single propagator.
pub fn apply_fourier(d: &Diagram, v: &str) -> Result<Diagram, DiagramError> {
    require_internal(d, v)?;
    let waves = d.waves_at(v);
    if waves.is_empty() {
        return Err(DiagramError::NoPlaneWave(v.to_string()));
    }
    let inc = d.incident(v);
    if inc.len() != 1 || waves.len() != 1 {
        return Err(DiagramError::WrongDegree(v.to_string()));
    }
    let z = other_end(&d.edges[inc[0]], v).to_string();
    let (alpha, sign) = d.oriented(inc[0], &z, v);
    let p = d.waves[waves[0]].momentum.clone();
    let mut out = d.clone();
    out.edges.remove(inc[0]);
    out.waves[waves[0]].vertex = z;
    out.remove_internal(v);
    out.prefactor = out
        .prefactor
        .times_sign(sign)
        .times_pi(1)
        .times_i(alpha.m())
        .times_a(alpha)
        .times_momentum(&p, alpha.reflect());
    Ok(out)
}

/// Vertex pattern for the exchange relation.
///
/// `w` is an internal vertex joined to `z1` (index α) and `z2` (index β),
/// both read as `D(z − w)`. If `w` has a third neighbour `z0` (index γ, with
/// α+β+γ = 2), the side lines `D_x(z2 − z0)` and `D_y(z0 − z1)` are shifted:
/// `α' = α+δ, β' = β−δ, x' = x+δ, y' = y−δ`, and the prefactor gains
/// `a(α)a(β) / (a(α')a(β'))`. With `w` of degree 2 the factor also carries
/// `(−1)^{[β]−[β']}`. Absent side lines count as index 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangePattern {
    pub w: String,
    pub z1: String,
    pub z2: String,
    pub z0: Option<String>,
}

pub fn apply_exchange(
    d: &Diagram,
    pat: &ExchangePattern,
    new_indices: (FieldExponent, FieldExponent),
) -> Result<Diagram, DiagramError> {
    require_internal(d, &pat.w)?;
    let w = pat.w.as_str();
    let inc = d.incident(w);
    let want = if pat.z0.is_some() { 3 } else { 2 };
    if inc.len() != want || !d.waves_at(w).is_empty() {
        return Err(DiagramError::WrongDegree(w.to_string()));
    }
    let edge_to = |z: &str| {
        inc.iter()
            .copied()
            .find(|&i| other_end(&d.edges[i], w) == z)
            .ok_or_else(|| DiagramError::UnknownVertex(z.to_string()))
    };
    let i1 = edge_to(&pat.z1)?;
    let i2 = edge_to(&pat.z2)?;
    let (alpha, s1) = d.oriented(i1, w, &pat.z1);
    let (beta, s2) = d.oriented(i2, w, &pat.z2);
    let (ap, bp) = new_indices;
    let diff = alpha + beta - ap - bp;
    if !diff.is_zero(MERGE_TOL) {
        return Err(DiagramError::IndexSumMismatch);
    }
    let delta = ap - alpha;
    let mut out = d.clone();
    out.prefactor = out.prefactor.times_sign(s1 * s2);
    out.edges[i1] = Edge {
        from: w.to_string(),
        to: pat.z1.clone(),
        alpha: ap,
    };
    out.edges[i2] = Edge {
        from: w.to_string(),
        to: pat.z2.clone(),
        alpha: bp,
    };
    out.prefactor = out.prefactor.times_a(alpha).times_a(beta).times_gamma(ap, 1).times_gamma(bp, 1);
    match &pat.z0 {
        None => {
            out.prefactor = out.prefactor.times_parity(beta.m() - bp.m());
        }
        Some(z0) => {
            let i0 = edge_to(z0)?;
            let (gamma, _) = d.oriented(i0, w, z0);
            let sum = alpha + beta + gamma;
            if sum.m() != 0 || (sum.w() - c64(2.0, 0.0)).norm() > MERGE_TOL {
                return Err(DiagramError::UniquenessViolated(sum.a(), sum.abar()));
            }
            out.edges.push(Edge {
                from: z0.clone(),
                to: pat.z2.clone(),
                alpha: delta,
            });
            out.edges.push(Edge {
                from: pat.z1.clone(),
                to: z0.clone(),
                alpha: -delta,
            });
        }
    }
    Ok(out.merge_parallel())
}
