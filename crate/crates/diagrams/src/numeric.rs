//! Direct quadrature of a diagram.

use std::collections::HashMap;

use num_complex::Complex64;
use plane::{integrate_c2, plane_wave_integral, propagator_unchecked, IntegralEstimate, QuadratureSpec, WaveFactor};

use crate::diagram::{Diagram, Position};
use crate::reduce::with_points;
use crate::DiagramError;

/// Integrates the internal vertices of `d` over the plane.
///
/// A single internal vertex carrying plane waves goes through the contour
/// quadrature for oscillatory integrals; otherwise up to three internal
/// vertices are integrated directly. External momenta and points are read
/// from `bindings` (points may also be fixed in the diagram).
pub fn numeric_eval(
    d: &Diagram,
    bindings: &HashMap<String, Complex64>,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate, DiagramError> {
    d.validate()?;
    let b = with_points(&d.external, bindings);
    let mut ext: HashMap<&str, Complex64> = HashMap::new();
    for e in &d.external {
        let z = match &e.position {
            Position::Point(z) => *z,
            Position::Momentum(s) => *b.get(s).ok_or_else(|| DiagramError::Unbound(s.clone()))?,
        };
        ext.insert(e.label.as_str(), z);
    }
    let pref = d.prefactor.eval(&b)?;
    let momentum = |s: &str| b.get(s).copied().ok_or_else(|| DiagramError::Unbound(s.to_string()));

    // Constant part: edges between external vertices and waves on them.
    let mut constant = pref;
    for e in &d.edges {
        if let (Some(zf), Some(zt)) = (ext.get(e.from.as_str()), ext.get(e.to.as_str())) {
            constant *= plane::eval_propagator(&e.alpha, zt - zf)?;
        }
    }
    for w in &d.waves {
        if let Some(z) = ext.get(w.vertex.as_str()) {
            constant *= Complex64::new(0.0, 2.0 * (momentum(&w.momentum)? * z).re).exp();
        }
    }
    let k = d.internal.len();
    if k == 0 {
        return Ok(IntegralEstimate {
            value: constant,
            err: 0.0,
            evals: 0,
            converged: true,
        });
    }
    for v in &d.internal {
        for &i in &d.incident(v) {
            let p = plane::local_power(&d.edges[i].alpha);
            if p >= 1.9 {
                return Err(DiagramError::Plane(plane::PlaneError::SingularityTooStrong(p)));
            }
        }
    }
    let has_waves = d.waves.iter().any(|w| d.is_internal(&w.vertex));
    if has_waves {
        if k != 1 {
            return Err(DiagramError::Invalid("plane waves are supported on a single internal vertex".into()));
        }
        let v = &d.internal[0];
        let mut p = Complex64::new(0.0, 0.0);
        for &i in &d.waves_at(v) {
            p += momentum(&d.waves[i].momentum)?;
        }
        let mut factors = Vec::new();
        for &i in &d.incident(v) {
            let e = &d.edges[i];
            if e.from == *v {
                factors.push(WaveFactor::new(e.alpha, ext[e.to.as_str()]));
            } else {
                factors.push(WaveFactor::outward(e.alpha, ext[e.from.as_str()]));
            }
        }
        let mut est = plane_wave_integral(p, &factors, spec)?;
        est.value *= constant;
        est.err *= constant.norm();
        return Ok(est);
    }
    if k > 3 {
        return Err(DiagramError::Invalid(format!("{k} internal vertices, at most 3 supported")));
    }
    for v in &d.internal {
        let total: f64 = d.incident(v).iter().map(|&i| plane::local_power(&d.edges[i].alpha)).sum();
        if total <= 2.0 {
            return Err(DiagramError::Invalid(format!("integrand does not decay at vertex {v}")));
        }
    }
    // Edge endpoints as either a fixed point or an integration slot.
    enum End {
        Fixed(Complex64),
        Slot(usize),
    }
    let end = |v: &str| -> End {
        match d.internal.iter().position(|x| x == v) {
            Some(j) => End::Slot(j),
            None => End::Fixed(ext[v]),
        }
    };
    let lines: Vec<(End, End, cfield::FieldExponent)> = d
        .edges
        .iter()
        .filter(|e| d.is_internal(&e.from) || d.is_internal(&e.to))
        .map(|e| (end(&e.from), end(&e.to), e.alpha))
        .collect();
    let f = |w: &[Complex64]| -> Complex64 {
        let at = |x: &End| match x {
            End::Fixed(z) => *z,
            End::Slot(j) => w[*j],
        };
        let mut v = Complex64::new(1.0, 0.0);
        for (a, b, alpha) in &lines {
            v *= propagator_unchecked(alpha, at(b) - at(a));
        }
        v
    };
    let mut s = spec.clone();
    for z in ext.values() {
        if !s.singularity_centers.iter().any(|c| (c - z).norm() < 1e-12) {
            s.singularity_centers.push(*z);
        }
    }
    s.singularity_centers.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut est = integrate_c2(&f, k, &s)?;
    est.value *= constant;
    est.err *= constant.norm();
    Ok(est)
}
