//! Quadrature over `C^k` by a partition of unity around singularity centers,
//! each piece integrated in polar coordinates (angular trapezoid, exp-sinh in r).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::de::{de_quad, DeMap};
use crate::{IntegralEstimate, PlaneError, QuadratureSpec};

const PARTITION_POWER: i32 = 8;
const MIN_ANGLES: usize = 8;
const MAX_ANGLES: usize = 4096;
const ANGLE_OFFSET: f64 = 0.1234567;

/// Integrates `f` over `C^k`, `k ∈ {1, 2, 3}`.
///
/// The integrand receives all `k` variables. Singularities must sit at the
/// declared centers or at coincidences between integration variables.
pub fn integrate_c2<F>(f: &F, k: usize, spec: &QuadratureSpec) -> Result<IntegralEstimate, PlaneError>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    spec.validate()?;
    if !(1..=3).contains(&k) {
        return Err(PlaneError::BadDimension(k));
    }
    let est = nested(f, k, &[], spec, spec.abs_tol, spec.rel_tol);
    if est.converged {
        Ok(est)
    } else {
        Err(PlaneError::NotConverged(est))
    }
}

fn nested<F>(f: &F, k: usize, outer: &[Complex64], spec: &QuadratureSpec, abs_tol: f64, rel_tol: f64) -> IntegralEstimate
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let mut centers = spec.singularity_centers.clone();
    centers.extend_from_slice(outer);
    if k == 1 {
        let g = |w: Complex64| {
            let mut v = outer.to_vec();
            v.push(w);
            f(&v)
        };
        return polar_sum(&g, &centers, spec, abs_tol, rel_tol);
    }
    let g = |w: Complex64| {
        let mut v = outer.to_vec();
        v.push(w);
        let inner = nested(f, k - 1, &v, spec, abs_tol * 0.1, rel_tol * 0.1);
        inner.value
    };
    polar_sum(&g, &centers, spec, abs_tol, rel_tol)
}

fn dedup(points: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for p in points {
        if !out.iter().any(|q| (q - p).norm() < 1e-12) {
            out.push(*p);
        }
    }
    if out.is_empty() {
        out.push(Complex64::new(0.0, 0.0));
    }
    out
}

/// Weight of center `j` in the partition of unity at `z`.
fn partition_weight(z: Complex64, j: usize, centers: &[Complex64]) -> f64 {
    let dj = (z - centers[j]).norm();
    let mut s = 0.0;
    for (i, c) in centers.iter().enumerate() {
        if i == j {
            s += 1.0;
            continue;
        }
        let di = (z - c).norm();
        if di == 0.0 {
            return 0.0;
        }
        s += (dj / di).powi(PARTITION_POWER);
    }
    1.0 / s
}

fn polar_sum<G>(g: &G, centers: &[Complex64], spec: &QuadratureSpec, abs_tol: f64, rel_tol: f64) -> IntegralEstimate
where
    G: Fn(Complex64) -> Complex64 + Sync,
{
    let centers = dedup(centers);
    let n = centers.len();
    let budget = spec.max_evals / n.max(1);
    let parts: Vec<IntegralEstimate> = (0..n)
        .map(|j| {
            let scale = if n == 1 {
                spec.outer_cutoff
            } else {
                centers
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, c)| (c - centers[j]).norm())
                    .fold(f64::INFINITY, f64::min)
            };
            let h = |z: Complex64| {
                let wgt = partition_weight(z, j, &centers);
                if wgt == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    g(z) * wgt
                }
            };
            polar_one(&h, centers[j], scale, abs_tol / n as f64, rel_tol, budget)
        })
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    for p in &parts {
        value += p.value;
        err += p.err;
        evals += p.evals;
    }
    // the tolerance applies to the sum; a small part may miss its own relative target
    let converged = err.is_finite() && err <= abs_tol.max(rel_tol * value.norm());
    IntegralEstimate {
        value,
        err,
        evals,
        converged,
    }
}

fn polar_one<H>(h: &H, c: Complex64, scale: f64, abs_tol: f64, rel_tol: f64, budget: usize) -> IntegralEstimate
where
    H: Fn(Complex64) -> Complex64 + Sync,
{
    let ray_abs = abs_tol * 1e-2 / (2.0 * PI);
    let ray = |theta: f64| {
        let dir = Complex64::from_polar(1.0, theta);
        de_quad(
            |r| h(c + dir * r) * r,
            DeMap::ExpSinh { a: 0.0, scale },
            ray_abs,
            rel_tol * 1e-2,
            9,
        )
    };
    let mut m = MIN_ANGLES;
    let mut rays: Vec<(Complex64, usize, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let r = ray(ANGLE_OFFSET + 2.0 * PI * i as f64 / m as f64);
            (r.value, r.evals, r.err)
        })
        .collect();
    let total = |rays: &[(Complex64, usize, f64)], m: usize| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for r in rays {
            s += r.0;
        }
        s * (2.0 * PI / m as f64)
    };
    let mut est = total(&rays, m);
    let mut evals: usize = rays.iter().map(|r| r.1).sum();
    let mut err = f64::INFINITY;
    let mut converged = false;
    let mut level = 0;
    while m < MAX_ANGLES && evals < budget {
        let new: Vec<(Complex64, usize, f64)> = (0..m)
            .into_par_iter()
            .map(|i| {
                let r = ray(ANGLE_OFFSET + 2.0 * PI * (i as f64 + 0.5) / m as f64);
                (r.value, r.evals, r.err)
            })
            .collect();
        evals += new.iter().map(|r| r.1).sum::<usize>();
        rays.extend(new);
        m *= 2;
        let next = total(&rays, m);
        err = (next - est).norm();
        est = next;
        level += 1;
        let ray_err: f64 = rays.iter().map(|r| r.2).sum::<f64>() * (2.0 * PI / m as f64);
        err += ray_err;
        if level >= 2 && err <= abs_tol.max(rel_tol * est.norm()) {
            converged = true;
            break;
        }
    }
    IntegralEstimate {
        value: est,
        err,
        evals,
        converged,
    }
}
