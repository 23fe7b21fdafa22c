//! Lattice sums over `n_k ∈ ℤ + σ/2` of contour integrals over `ν_k`, for one
//! or two variables coupled through `1/(Γ[u_1−u_2]Γ[u_2−u_1])`.

use std::f64::consts::PI;

use cfield::{c64, ln_cgamma, FieldExponent, LnGamma};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use plane::de::{de_quad, DeMap};
use plane::IntegralEstimate;
use rayon::prelude::*;

use crate::{GustafsonError, MBSpec};

const MAX_LEVEL: u32 = 12;
const TILT: f64 = PI / 4.0;
const TAIL_TERMS: usize = 4;

/// One-variable integrand at fixed `n`: `exp(κν + λ) Π Γ[σν + c, σν + c̄]`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Terms {
    /// `(σ, c, c̄)` with `σ = ±1`.
    pub gammas: Vec<(f64, Complex64, Complex64)>,
    pub kappa: Complex64,
    pub lambda: Complex64,
}

/// Past this modulus the Γ-factors are combined in one Stirling expansion, so
/// that their `ν ln ν` growth cancels exactly.
const ASYMPTOTIC: f64 = 1e4;

fn stirling_tail(v: Complex64) -> Complex64 {
    let r = v.inv();
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

impl Terms {
    pub fn push(&mut self, sigma: f64, c: Complex64, cbar: Complex64) {
        self.gammas.push((sigma, c, cbar));
    }

    /// `ln` of the integrand; `None` is an exact zero.
    pub fn ln_value(&self, s: Complex64) -> Option<Complex64> {
        if s.norm() < ASYMPTOTIC || s.im.abs() < 1.0 {
            self.ln_direct(s)
        } else {
            Some(self.ln_asymptotic(s))
        }
    }

    fn ln_direct(&self, s: Complex64) -> Option<Complex64> {
        let mut acc = self.kappa * s + self.lambda;
        for &(sg, c, cb) in &self.gammas {
            let e = FieldExponent::new(sg * s + c, sg * s + cb).ok()?;
            match ln_cgamma(&e) {
                LnGamma::Finite(l) => acc += l,
                LnGamma::Zero => return None,
                LnGamma::Pole => return Some(c64(f64::NAN, 0.0)),
            }
        }
        Some(acc)
    }

    fn ln_asymptotic(&self, s: Complex64) -> Complex64 {
        let mut acc = self.kappa * s + self.lambda;
        // Γ[a, ā] = Γ(a)/Γ(1 − ā): entries (ε, σ', c') of ε ln Γ(σ' ν + c').
        let ln_s = s.ln();
        let flip = -s.im.signum();
        let (mut lin, mut branch, mut log_coef, mut rest) = (0.0, 0.0, c64(0.0, 0.0), c64(0.0, 0.0));
        for &(sg, c, cb) in &self.gammas {
            for (eps, sp, cp) in [(1.0, sg, c), (-1.0, -sg, c64(1.0, 0.0) - cb)] {
                let v = sp * s + cp;
                lin += eps * sp;
                if sp < 0.0 {
                    branch += eps * sp * flip;
                }
                log_coef += eps * (cp - 0.5);
                let d = if sp < 0.0 { flip } else { 0.0 };
                rest += eps * ((v - 0.5) * (cp / (sp * s)).ln_1p() + (cp - 0.5) * c64(0.0, PI * d) - cp + stirling_tail(v));
            }
        }
        acc += ln_s * (s * lin + log_coef) + s * (c64(0.0, PI * branch) - lin) + rest;
        acc
    }
}

trait Ln1p {
    fn ln_1p(self) -> Self;
}

impl Ln1p for Complex64 {
    /// `ln(1 + z)` accurate for small `|z|`.
    fn ln_1p(self) -> Complex64 {
        let w = c64(1.0, 0.0) + self;
        if w == c64(1.0, 0.0) {
            return self;
        }
        w.ln() * self / (w - 1.0)
    }
}

/// The integrand profile for each doubled discrete part `n2`.
pub(crate) type Profile<'a> = dyn Fn(i32) -> Terms + Sync + 'a;

pub(crate) struct Lattice<'a> {
    pub nvars: usize,
    pub profile: &'a Profile<'a>,
    /// `Re ν_k` of each contour.
    pub shifts: Vec<f64>,
    /// Heights `Im ν` of the pole series, used as panel breakpoints.
    pub breakpoints: Vec<f64>,
    /// `ln|ζ|`: nonzero tilts the ν tails and makes the `n` sums converge exponentially.
    pub ln_zeta_modulus: f64,
    /// Oscillation angles of the shell tail.
    pub phases: Vec<f64>,
    /// Power `p` of the shell tail `K^{−p}`, complex in general.
    pub tail_power: Complex64,
    /// Coupling carries `(−1)^{n_1−n_2}`.
    pub alternating: bool,
}

pub(crate) struct LatticeSum {
    pub estimate: IntegralEstimate,
    /// Partial sums over shells `0..=K`, `K = 0..=n_max`.
    pub partial_sums: Vec<Complex64>,
}

/// Doubled lattice points `n2 = 2n` with shell index `⌊|n|⌋ ≤ n_max`.
pub(crate) fn lattice_points(sigma: u8, n_max: usize) -> Vec<i32> {
    let k = n_max as i32;
    if sigma == 0 {
        (-k..=k).map(|j| 2 * j).collect()
    } else {
        (-k - 1..=k).map(|j| 2 * j + 1).collect()
    }
}

fn shell(n2: i32) -> usize {
    (n2.unsigned_abs() / 2) as usize
}

#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    fn add(&mut self, v: Complex64) {
        let t = self.sum + v;
        let fix = |s: f64, v: f64, t: f64| if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        self.comp += c64(fix(self.sum.re, v.re, t.re), fix(self.sum.im, v.im, t.im));
        self.sum = t;
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

struct Contour<'a> {
    lat: &'a Lattice<'a>,
    spec: &'a MBSpec,
    shift: f64,
}

impl Contour<'_> {
    /// `∫ f(ν) dν/(2πi)` up the line `Re ν = shift`.
    fn integrate(&self, f: &(dyn Fn(Complex64) -> Complex64 + Sync), n2: i32, abs_tol: f64) -> Result<IntegralEstimate, GustafsonError> {
        let lam = self.spec.nu_cutoff;
        let c = self.shift;
        let rel = self.spec.tol;
        let mut cuts = vec![-lam, lam];
        cuts.extend(self.lat.breakpoints.iter().copied().filter(|b| b.abs() < lam));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let panels = (cuts.len() - 1 + 2) as f64;
        let mut total = IntegralEstimate {
            value: c64(0.0, 0.0),
            err: 0.0,
            evals: 0,
            converged: true,
        };
        let mut absorb = |r: plane::de::DeResult, factor: Complex64| {
            total.value += r.value * factor;
            total.err += r.err * factor.norm();
            total.evals += r.evals;
            total.converged &= r.converged;
        };
        let line = c64(1.0 / (2.0 * PI), 0.0);
        for w in cuts.windows(2) {
            let r = de_quad(|t| f(c64(c, t)), DeMap::TanhSinh { a: w[0], b: w[1] }, abs_tol / panels, rel, MAX_LEVEL);
            absorb(r, line);
        }
        if self.spec.nu_tails {
            let m = self.lat.ln_zeta_modulus;
            // |ζ|^{2 Re ν} decays to the right for |ζ| < 1.
            let (alpha, scale) = if m.abs() > 1e-12 {
                let rate = 2.0 * m.abs() * TILT.sin();
                (-m.signum() * TILT, (1.0 / rate).min(lam + n2.abs() as f64 / 4.0))
            } else {
                (0.0, lam.max(1.0) + n2.abs() as f64 / 4.0)
            };
            let to_ray = c64(0.0, -1.0 / (2.0 * PI));
            let up = Complex64::from_polar(1.0, PI / 2.0 - alpha);
            let down = Complex64::from_polar(1.0, -(PI / 2.0 - alpha));
            let top = c64(c, lam);
            let bottom = c64(c, -lam);
            let r = de_quad(|r| f(top + up * r), DeMap::ExpSinh { a: 0.0, scale }, abs_tol / panels, rel, MAX_LEVEL);
            absorb(r, up * to_ray);
            let r = de_quad(|r| f(bottom + down * r), DeMap::ExpSinh { a: 0.0, scale }, abs_tol / panels, rel, MAX_LEVEL);
            absorb(r, -down * to_ray);
        }
        Ok(total)
    }
}

fn profile_value(terms: &Terms, s: Complex64) -> Complex64 {
    match terms.ln_value(s) {
        Some(l) => l.exp(),
        None => c64(0.0, 0.0),
    }
}

/// `M_j(n) = ∫ ν^j g(n, ν) dν/(2πi)` for `j < count`.
fn moments(lat: &Lattice, spec: &MBSpec, shift: f64, n2: i32, count: usize, scale: f64) -> Result<(Vec<Complex64>, f64, usize), GustafsonError> {
    let contour = Contour { lat, spec, shift };
    let terms = (lat.profile)(n2);
    let mut out = Vec::with_capacity(count);
    let mut err = 0.0;
    let mut evals = 0;
    let radius = 1.0 + n2.abs() as f64 / 4.0 + shift.abs();
    for j in 0..count {
        let f = |s: Complex64| profile_value(&terms, s) * s.powu(j as u32);
        let e = contour.integrate(&f, n2, spec.tol * 1e-2 * scale * radius.powi(j as i32))?;
        if !e.converged {
            return Err(GustafsonError::NotConverged(e));
        }
        out.push(e.value);
        err += e.err;
        evals += e.evals;
    }
    Ok((out, err, evals))
}

/// `∫|g(n2, ν)| |dν|/2π` on the truncated line: the absolute scale of the integrand.
fn abs_scale(lat: &Lattice, spec: &MBSpec, shift: f64, n2: i32) -> f64 {
    let lam = spec.nu_cutoff;
    let terms = (lat.profile)(n2);
    let f = |t: f64| c64(profile_value(&terms, c64(shift, t)).norm(), 0.0);
    let r = de_quad(f, DeMap::TanhSinh { a: -lam, b: lam }, 0.0, 1e-4, 8);
    (r.value.re / (2.0 * PI)).max(f64::MIN_POSITIVE)
}

pub(crate) fn lattice_sum(lat: &Lattice, spec: &MBSpec) -> Result<LatticeSum, GustafsonError> {
    if lat.nvars == 0 || lat.nvars > 2 || lat.shifts.len() != lat.nvars {
        return Err(GustafsonError::Unsupported(format!("{} integration variables", lat.nvars)));
    }
    if spec.nu_tails && lat.ln_zeta_modulus.abs() > 1e-12 {
        let top = lat.breakpoints.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if spec.nu_cutoff < top + 0.5 {
            return Err(GustafsonError::InvalidSpec(format!(
                "nu_cutoff {} must exceed the pole heights {top} by 0.5 to tilt the tails",
                spec.nu_cutoff
            )));
        }
    }
    let points = lattice_points(spec.sigma, spec.n_max);
    let count = if lat.nvars == 2 { 3 } else { 1 };
    let mut shifts = lat.shifts.clone();
    shifts.sort_by(f64::total_cmp);
    shifts.dedup();
    let base = points[points.len() / 2];
    let mut table = Vec::new();
    let mut quad_err = 0.0;
    let mut evals = 0;
    for &c in &shifts {
        let scale = abs_scale(lat, spec, c, base);
        let rows: Vec<_> = points.par_iter().map(|&n2| moments(lat, spec, c, n2, count, scale)).collect();
        let mut per_n = Vec::with_capacity(points.len());
        for r in rows {
            let (m, e, k) = r?;
            quad_err += e;
            evals += k;
            per_n.push(m);
        }
        table.push((c, per_n));
    }
    let lookup = |k: usize| -> &Vec<Vec<Complex64>> { &table.iter().find(|(c, _)| *c == lat.shifts[k]).expect("shift table").1 };
    let mut shells = vec![Neumaier::default(); spec.n_max + 1];
    if lat.nvars == 1 {
        for (i, &n2) in points.iter().enumerate() {
            shells[shell(n2)].add(lookup(0)[i][0]);
        }
    } else {
        let (a, b) = (lookup(0), lookup(1));
        for (i, &na) in points.iter().enumerate() {
            for (j, &nb) in points.iter().enumerate() {
                let d = (na - nb) / 2;
                let sign = if lat.alternating && d.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                let (x, y) = (&a[i], &b[j]);
                let q = (d * d) as f64 / 4.0;
                let term = q * x[0] * y[0] - x[2] * y[0] + 2.0 * x[1] * y[1] - x[0] * y[2];
                shells[shell(na).max(shell(nb))].add(sign * term);
            }
        }
    }
    let mut partial_sums = Vec::with_capacity(shells.len());
    let mut acc = Neumaier::default();
    for s in &shells {
        acc.add(s.value());
        partial_sums.push(acc.value());
    }
    let last = *partial_sums.last().expect("n_max ≥ 1");
    let step = (last - partial_sums[partial_sums.len() - 2]).norm();
    let power_law = lat.ln_zeta_modulus.abs() <= 1e-12;
    let (value, fit_err) = match (spec.n_extrapolate && power_law)
        .then(|| fit_tail(&partial_sums, (1.0 + spec.sigma as f64) / 2.0, lat.tail_power, &lat.phases, TAIL_TERMS))
        .flatten()
    {
        Some(fit) => (fit.limit, fit.err),
        None => (last, step),
    };
    Ok(LatticeSum {
        estimate: IntegralEstimate {
            value,
            err: fit_err + quad_err,
            evals,
            converged: true,
        },
        partial_sums,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit {
    pub limit: Complex64,
    /// Change of the limit when the last correction order is dropped.
    pub err: f64,
}

fn solve_limit(partial: &[Complex64], r0: f64, power: Complex64, phases: &[f64], terms: usize) -> Option<Complex64> {
    let kmax = partial.len() - 1;
    let k0 = kmax / 2;
    let rows = kmax - k0 + 1;
    let cols = 1 + phases.len() * terms;
    if rows < cols + 2 {
        return None;
    }
    let column = |k: usize, c: usize| -> Complex64 {
        if c == 0 {
            return c64(1.0, 0.0);
        }
        let (h, j) = ((c - 1) / terms, (c - 1) % terms);
        let r = k as f64 + r0;
        c64(r, 0.0).powc(-power - j as f64) * Complex64::from_polar(1.0, phases[h] * k as f64)
    };
    let norms: Vec<f64> = (0..cols).map(|c| (k0..=kmax).map(|k| column(k, c).norm()).fold(0.0, f64::max)).collect();
    let a = DMatrix::from_fn(rows, cols, |i, c| column(k0 + i, c) / norms[c]);
    let b = DVector::from_fn(rows, |i, _| partial[k0 + i]);
    let x = a.svd(true, true).solve(&b, 1e-13).ok()?;
    Some(x[0] / norms[0])
}

/// Limit of partial sums `P(K) ≈ L + Σ_h Σ_{j<terms} b_{hj} e^{iφ_h K} (K + r0)^{−p−j}`,
/// least-squares fitted over `K ∈ [K_max/2, K_max]`.
pub fn fit_tail(partial: &[Complex64], r0: f64, power: Complex64, phases: &[f64], terms: usize) -> Option<TailFit> {
    if terms < 2 || partial.len() < 4 {
        return None;
    }
    let hi = solve_limit(partial, r0, power, phases, terms)?;
    let lo = solve_limit(partial, r0, power, phases, terms - 1)?;
    Some(TailFit {
        limit: hi,
        err: (hi - lo).norm(),
    })
}

/// Distinct harmonics `{h φ}` modulo 2π.
pub(crate) fn harmonics(phi: f64, orders: &[i32]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &h in orders {
        let a = (h as f64 * phi).rem_euclid(2.0 * PI);
        let a = if a > PI { a - 2.0 * PI } else { a };
        if !out.iter().any(|b| {
            let d = (a - b).rem_euclid(2.0 * PI);
            d < 1e-9 || 2.0 * PI - d < 1e-9
        }) {
            out.push(a);
        }
    }
    out
}
