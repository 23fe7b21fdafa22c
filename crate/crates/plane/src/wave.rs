//! Plane-wave integrals `∫ d²w e^{i(pw + p̄w̄)} ∏ D_{α_j}(±(c_j − w))`.
//!
//! Coordinates are rotated so that the phase is `e^{2i|p|X}`. For each `Y`
//! the `X` line is deformed into a finite segment plus two vertical rays in
//! the upper half plane, where the wave decays. The `Y` integral is split
//! symmetrically around every center so principal-value parts cancel.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use cfield::{afactor, FieldExponent};
use num_complex::Complex64;

use crate::de::{de_quad, DeMap};
use crate::{eval_propagator, IntegralEstimate, PlaneError, QuadratureSpec};

const MARGIN: f64 = 1.0;
const INNER_LEVELS: u32 = 9;
const OUTER_LEVELS: u32 = 9;
const FAR_DECAY: f64 = 60.0;

/// `D_α(c − w)`, or `D_α(w − c)` when `outward`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveFactor {
    pub alpha: FieldExponent,
    pub center: Complex64,
    pub outward: bool,
}

impl WaveFactor {
    pub fn new(alpha: FieldExponent, center: Complex64) -> Self {
        Self {
            alpha,
            center,
            outward: false,
        }
    }

    pub fn outward(alpha: FieldExponent, center: Complex64) -> Self {
        Self {
            alpha,
            center,
            outward: true,
        }
    }
}

#[derive(Clone, Copy)]
enum Branch {
    Real,
    Left,
    Right,
}

/// `coeff · ∏ factors`, one term of [`plane_wave_sum`].
#[derive(Clone, Debug, PartialEq)]
pub struct WaveTerm {
    pub coeff: Complex64,
    pub factors: Vec<WaveFactor>,
}

/// (x', y', w, m) per factor after rotation.
type RotatedFactor = (f64, f64, Complex64, f64);

struct Rotated {
    /// `ln` of the rotated coefficient and the factors of each term.
    terms: Vec<(Complex64, Vec<RotatedFactor>)>,
    kappa: f64,
}

impl Rotated {
    /// `ln ∏ D(z'_j − ω)` at `ω = X + iY`, `X` possibly complex on a ray.
    fn ln_product(factors: &[RotatedFactor], x: Complex64, y: f64, branch: Branch) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(xp, yp, w, m) in factors {
            match branch {
                Branch::Real => {
                    let dx = xp - x.re;
                    let dy = yp - y;
                    let lr = 0.5 * (dx * dx + dy * dy).ln();
                    let th = dy.atan2(dx);
                    acc += -2.0 * w * lr - Complex64::new(0.0, m * th);
                }
                Branch::Left | Branch::Right => {
                    let u1 = Complex64::new(xp - x.re, yp - y - x.im);
                    let u2 = Complex64::new(xp - x.re, -yp + y - x.im);
                    let mut a1 = u1.im.atan2(u1.re);
                    let mut a2 = u2.im.atan2(u2.re);
                    if let Branch::Right = branch {
                        if a1 < 0.0 {
                            a1 += 2.0 * PI;
                        }
                        if a2 > 0.0 {
                            a2 -= 2.0 * PI;
                        }
                    }
                    let l1 = Complex64::new(u1.norm().ln(), a1);
                    let l2 = Complex64::new(u2.norm().ln(), a2);
                    acc += -w * (l1 + l2) - 0.5 * m * (l1 - l2);
                }
            }
        }
        acc
    }

    fn integrand(&self, x: Complex64, y: f64, branch: Branch) -> Complex64 {
        let wave = Complex64::new(0.0, self.kappa) * x;
        self.terms
            .iter()
            .map(|(c, f)| (c + Self::ln_product(f, x, y, branch) + wave).exp())
            .sum()
    }

    fn centers(&self) -> impl Iterator<Item = &RotatedFactor> {
        self.terms.iter().flat_map(|t| t.1.iter())
    }
}

/// `∫ d²w e^{i(pw + p̄w̄)} ∏_j D_{α_j}(±(c_j − w))`.
pub fn plane_wave_integral(p: Complex64, factors: &[WaveFactor], spec: &QuadratureSpec) -> Result<IntegralEstimate, PlaneError> {
    let term = WaveTerm {
        coeff: Complex64::new(1.0, 0.0),
        factors: factors.to_vec(),
    };
    plane_wave_sum(p, &[term], spec)
}

/// `∫ d²w e^{i(pw + p̄w̄)} Σ_t c_t ∏_j D_{α_tj}(±(c_tj − w))`, summed under the
/// integral so that singular parts of the terms may cancel.
pub fn plane_wave_sum(p: Complex64, terms: &[WaveTerm], spec: &QuadratureSpec) -> Result<IntegralEstimate, PlaneError> {
    spec.validate()?;
    if p.norm() == 0.0 || terms.is_empty() || terms.iter().any(|t| t.factors.is_empty()) {
        return Err(PlaneError::InvalidSpec("plane-wave integral needs p ≠ 0 and at least one factor".into()));
    }
    for t in terms {
        let total_power: f64 = t.factors.iter().map(|f| 2.0 * f.alpha.w().re).sum();
        if total_power <= 0.0 {
            return Err(PlaneError::InvalidSpec("integrand does not decay at infinity".into()));
        }
    }
    let phi = p.im.atan2(p.re);
    let rot = Complex64::from_polar(1.0, phi);
    let mut rterms = Vec::with_capacity(terms.len());
    for t in terms.iter().filter(|t| t.coeff != Complex64::new(0.0, 0.0)) {
        let mut prefactor = t.coeff;
        let mut rf = Vec::with_capacity(t.factors.len());
        for f in &t.factors {
            let m = f.alpha.m();
            if f.outward && m.rem_euclid(2) == 1 {
                prefactor = -prefactor;
            }
            // D_α(e^{-iφ}) = e^{imφ}
            prefactor *= Complex64::from_polar(1.0, m as f64 * phi);
            let zc = rot * f.center;
            rf.push((zc.re, zc.im, f.alpha.w(), m as f64));
        }
        rterms.push((prefactor.ln(), rf));
    }
    if rterms.is_empty() {
        return Ok(IntegralEstimate {
            value: Complex64::new(0.0, 0.0),
            err: 0.0,
            evals: 0,
            converged: true,
        });
    }
    let r = Rotated {
        terms: rterms,
        kappa: 2.0 * p.norm(),
    };
    let evals = AtomicUsize::new(0);
    let inner_abs = spec.abs_tol * 1e-3;
    let inner_rel = spec.rel_tol * 1e-3;

    let mut xs: Vec<f64> = r.centers().map(|f| f.0).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let x_l = xs[0] - MARGIN;
    let x_r = xs[xs.len() - 1] + MARGIN;
    let mut breaks = vec![x_l];
    breaks.extend(xs.iter().copied());
    breaks.push(x_r);

    let ys_all: Vec<f64> = r.centers().map(|f| f.1).collect();
    let g = |y: f64| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        // The X transform decays like e^{-κ dist}; far out only rounding noise is left.
        let dist = ys_all.iter().map(|yk| (y - yk).abs()).fold(f64::INFINITY, f64::min);
        if r.kappa * dist > FAR_DECAY {
            return s;
        }
        for win in breaks.windows(2) {
            let q = de_quad(
                |x| r.integrand(Complex64::new(x, 0.0), y, Branch::Real),
                DeMap::TanhSinh { a: win[0], b: win[1] },
                inner_abs,
                inner_rel,
                INNER_LEVELS,
            );
            evals.fetch_add(q.evals, Ordering::Relaxed);
            s += q.value;
        }
        let i = Complex64::new(0.0, 1.0);
        for (x0, branch, sgn) in [(x_r, Branch::Right, 1.0), (x_l, Branch::Left, -1.0)] {
            let q = de_quad(
                |t| r.integrand(Complex64::new(x0, t), y, branch),
                DeMap::ExpSinh { a: 0.0, scale: 1.0 / r.kappa },
                inner_abs,
                inner_rel,
                INNER_LEVELS,
            );
            evals.fetch_add(q.evals, Ordering::Relaxed);
            s += i * sgn * q.value;
        }
        s
    };

    let mut ys: Vec<f64> = r.centers().map(|f| f.1).collect();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let half = |k: usize| -> f64 {
        let mut d = 2.0f64.max(2.0 / r.kappa);
        if k > 0 {
            d = d.min(0.5 * (ys[k] - ys[k - 1]));
        }
        if k + 1 < ys.len() {
            d = d.min(0.5 * (ys[k + 1] - ys[k]));
        }
        d
    };

    let outer = |abs_tol: f64, rel_tol: f64| {
        let mut value = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut mass = 0.0;
        let mut add = |q: crate::de::DeResult| {
            value += q.value;
            err += q.err;
            mass += q.value.norm();
        };
        for k in 0..ys.len() {
            let yk = ys[k];
            let d = half(k);
            add(de_quad(|s| g(yk + s) + g(yk - s), DeMap::TanhSinh { a: 0.0, b: d }, abs_tol, rel_tol, OUTER_LEVELS));
            if k + 1 < ys.len() {
                let a = yk + d;
                let b = ys[k + 1] - half(k + 1);
                if b - a > 1e-12 {
                    add(de_quad(g, DeMap::TanhSinh { a, b }, abs_tol, rel_tol, OUTER_LEVELS));
                }
            }
        }
        let top = ys[ys.len() - 1] + half(ys.len() - 1);
        let bottom = ys[0] - half(0);
        let tail = DeMap::ExpSinh { a: 0.0, scale: 1.0 / r.kappa };
        add(de_quad(|s| g(top + s), tail, abs_tol, rel_tol, OUTER_LEVELS));
        add(de_quad(|s| g(bottom - s), tail, abs_tol, rel_tol, OUTER_LEVELS));
        (value, err, mass)
    };
    let target = |v: Complex64| spec.abs_tol.max(spec.rel_tol * v.norm());
    let (mut value, mut err, mass) = outer(spec.abs_tol, spec.rel_tol);
    if !(err <= target(value)) && err.is_finite() && mass > 0.0 {
        // pieces cancel: ask each for its share of the total's tolerance
        let shrink = (value.norm() / mass).clamp(1e-4, 1.0) * 0.25;
        (value, err, _) = outer(spec.abs_tol * shrink, spec.rel_tol * shrink);
    }
    let evals = evals.load(Ordering::Relaxed);
    let converged = err <= target(value);
    let est = IntegralEstimate {
        value,
        err,
        evals,
        converged,
    };
    if converged {
        Ok(est)
    } else {
        Err(PlaneError::NotConverged(est))
    }
}

/// `∫ d²z e^{i(pz + p̄z̄)} D_α(z) = π i^{[α]} a(α) D_{1−α}(p)`, continued analytically in `α`.
pub fn fourier_closed(alpha: &FieldExponent, p: Complex64) -> Result<Complex64, PlaneError> {
    let i_m = Complex64::new(0.0, 1.0).powi(alpha.m());
    Ok(PI * i_m * afactor(alpha).value * eval_propagator(&alpha.reflect(), p)?)
}

/// `∫ d²z e^{i(pz + p̄z̄)} D_α(z)`.
pub fn fourier_propagator(alpha: &FieldExponent, p: Complex64, spec: &QuadratureSpec) -> Result<IntegralEstimate, PlaneError> {
    plane_wave_integral(p, &[WaveFactor::outward(*alpha, Complex64::new(0.0, 0.0))], spec)
}
