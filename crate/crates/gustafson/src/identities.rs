//! The two Gustafson identities and the `J_ω` integral, each evaluated as a
//! truncated lattice sum-plus-integral next to its closed form.

use std::f64::consts::PI;

use cfield::{c64, ln_cgamma, FieldExponent, LnGamma};
use num_complex::Complex64;
use plane::IntegralEstimate;

use crate::engine::{harmonics, lattice_sum, Lattice, LatticeSum, Terms};
use crate::signs::pair_sign_exponent;
use crate::{GustafsonError, MBPair, MBParams, MBSpec, SpectralPoint};

const POLE_TOL: f64 = 1e-6;

/// Numeric left side next to the closed-form right side.
#[derive(Clone, Debug, PartialEq)]
pub struct MBComparison {
    pub lhs: IntegralEstimate,
    pub rhs: Complex64,
    /// `Re ν_k` of the contours actually used.
    pub contour_shifts: Vec<f64>,
    /// Raw partial sums over shells `0..=K`, ν integrals complete.
    pub partial_sums: Vec<Complex64>,
}

impl MBComparison {
    pub fn abs_err(&self) -> f64 {
        (self.lhs.value - self.rhs).norm()
    }

    pub fn rel_err(&self) -> f64 {
        self.abs_err() / self.rhs.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JOmegaResult {
    /// Direct evaluation of `J_ω` against its closed form.
    pub comparison: MBComparison,
    /// The same integral through the second identity after `u_k → iy_k`.
    pub via_second: Complex64,
}

fn gamma_value(z: Complex64, zbar: Complex64) -> Result<Complex64, GustafsonError> {
    let e = FieldExponent::new(z, zbar).map_err(|e| GustafsonError::InvalidSpec(e.to_string()))?;
    match ln_cgamma(&e) {
        LnGamma::Finite(l) => Ok(l.exp()),
        LnGamma::Zero => Ok(c64(0.0, 0.0)),
        LnGamma::Pole => Err(GustafsonError::InvalidSpec(format!("closed form at a pole Γ[{z}, {zbar}]"))),
    }
}

fn gamma_of(p: MBPair) -> Result<Complex64, GustafsonError> {
    gamma_value(p.z(), p.zbar())
}

fn log_zeta(zeta: Complex64) -> Result<Complex64, GustafsonError> {
    if zeta.norm() == 0.0 || !zeta.re.is_finite() || !zeta.im.is_finite() || (zeta.im.abs() <= 1e-12 * zeta.norm() && zeta.re < 0.0) {
        return Err(GustafsonError::BranchCutHit(zeta));
    }
    Ok(zeta.ln())
}

/// `[ζ]^P = ζ^P ζ̄^{P̄}` on the principal branch, from `Log ζ`.
fn bracket_power(log: Complex64, p: Complex64, pbar: Complex64) -> Complex64 {
    (p * log + pbar * log.conj()).exp()
}

fn sum_pairs(ps: &[MBPair]) -> MBPair {
    ps.iter().fold(MBPair::scalar(c64(0.0, 0.0)), |a, b| a + *b)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `N! Π_{k,j} Γ(z_k + w_j) / Γ(Σ(z_k + w_k))`.
pub fn gustafson_first_rhs(n: usize, params: &MBParams) -> Result<Complex64, GustafsonError> {
    let mut v = c64(factorial(n), 0.0);
    for z in &params.z_list {
        for w in &params.w_list {
            v *= gamma_of(*z + *w)?;
        }
    }
    let total = sum_pairs(&params.z_list) + sum_pairs(&params.w_list);
    Ok(v / gamma_of(total)?)
}

/// `[ζ]^Z / [1+ζ]^{Z+W} Π_{k,j} Γ(z_k + w_j)`.
pub fn gustafson_second_rhs(params: &MBParams, zeta: Complex64) -> Result<Complex64, GustafsonError> {
    let lz = log_zeta(zeta)?;
    let l1 = (c64(1.0, 0.0) + zeta).ln();
    let z = sum_pairs(&params.z_list);
    let zw = z + sum_pairs(&params.w_list);
    let mut v = bracket_power(lz, z.z(), z.zbar()) / bracket_power(l1, zw.z(), zw.zbar());
    for a in &params.z_list {
        for b in &params.w_list {
            v *= gamma_of(*a + *b)?;
        }
    }
    Ok(v)
}

fn check_parity(params: &MBParams, sigma: u8) -> Result<(), GustafsonError> {
    let named = params
        .z_list
        .iter()
        .enumerate()
        .map(|(k, p)| (format!("z_{}", k + 1), p))
        .chain(params.w_list.iter().enumerate().map(|(k, p)| (format!("w_{}", k + 1), p)));
    for (name, p) in named {
        if p.n2.rem_euclid(2) as u8 != sigma {
            return Err(GustafsonError::ParityMismatch {
                name,
                bracket: p.bracket(),
                sigma,
            });
        }
        if !p.x.re.is_finite() || !p.x.im.is_finite() {
            return Err(GustafsonError::InvalidSpec(format!("{name} is not finite")));
        }
    }
    Ok(())
}

/// Contour offsets `Re ν_k`. Poles of `Γ(z_m − u)` sit at `Re ν = Re x_m + l/2` and
/// those of `Γ(u + w_m)` at `Re ν = −Re y_m − l/2`, `l ≥ 0`.
fn choose_shifts(params: &MBParams, nvars: usize, spec: &MBSpec) -> Result<Vec<f64>, GustafsonError> {
    let hi = params.z_list.iter().map(|p| p.x.re).fold(f64::INFINITY, f64::min);
    let lo = params.w_list.iter().map(|p| -p.x.re).fold(f64::NEG_INFINITY, f64::max);
    let shifts = if spec.contour_shifts.is_empty() {
        let c = if lo < 0.0 && 0.0 < hi && hi.min(-lo) > POLE_TOL { 0.0 } else { 0.5 * (lo + hi) };
        vec![c; nvars]
    } else if spec.contour_shifts.len() == nvars {
        spec.contour_shifts.clone()
    } else {
        return Err(GustafsonError::InvalidSpec(format!(
            "{} contour shifts for {nvars} variables",
            spec.contour_shifts.len()
        )));
    };
    for (k, &c) in shifts.iter().enumerate() {
        // distance of the line from the nearest member of each series
        let series = params
            .z_list
            .iter()
            .map(|p| p.x.re - c)
            .chain(params.w_list.iter().map(|p| c + p.x.re));
        for d in series {
            let hit = if d >= -POLE_TOL {
                d.abs()
            } else {
                let h = 2.0 * -d;
                (h - h.round()).abs() / 2.0
            };
            if hit < POLE_TOL {
                return Err(GustafsonError::PoleOnContour { variable: k, distance: hit });
            }
        }
        if !(lo < c && c < hi) {
            return Err(GustafsonError::ContoursDoNotSeparate(format!(
                "Re ν = {c} must lie in ({lo}, {hi})"
            )));
        }
    }
    Ok(shifts)
}

fn breakpoints(params: &MBParams) -> Vec<f64> {
    params
        .z_list
        .iter()
        .map(|p| p.x.im)
        .chain(params.w_list.iter().map(|p| -p.x.im))
        .collect()
}

struct Setup {
    shifts: Vec<f64>,
    breakpoints: Vec<f64>,
    ln_zeta_modulus: f64,
    phases: Vec<f64>,
    tail_power: Complex64,
}

fn setup(nvars: usize, params: &MBParams, spec: &MBSpec, zeta: Option<Complex64>) -> Result<Setup, GustafsonError> {
    spec.validate()?;
    check_parity(params, spec.sigma)?;
    let s = params.real_sum();
    let total: Complex64 = params.z_list.iter().chain(&params.w_list).map(|p| p.x).sum();
    let (ln_zeta_modulus, phi, tail_power) = match zeta {
        None => {
            if s >= 1.0 {
                return Err(GustafsonError::ConvergenceDomainViolated(format!("Σ Re(z_m + w_m) = {s} ≥ 1")));
            }
            (0.0, 0.0, 2.0 - 2.0 * total)
        }
        Some(z) => {
            let lz = log_zeta(z)?;
            if s >= 0.5 {
                return Err(GustafsonError::ConvergenceDomainViolated(format!("Σ Re(z_m + w_m) = {s} ≥ 1/2")));
            }
            (lz.re, lz.im + PI, 1.0 - 2.0 * total)
        }
    };
    let orders: &[i32] = if nvars == 1 { &[1, -1] } else { &[0, 1, -1] };
    Ok(Setup {
        shifts: choose_shifts(params, nvars, spec)?,
        breakpoints: breakpoints(params),
        ln_zeta_modulus,
        phases: harmonics(phi, orders),
        tail_power,
    })
}

fn run(nvars: usize, st: &Setup, profile: &(dyn Fn(i32) -> Terms + Sync), alternating: bool, spec: &MBSpec) -> Result<LatticeSum, GustafsonError> {
    let lat = Lattice {
        nvars,
        profile,
        shifts: st.shifts.clone(),
        breakpoints: st.breakpoints.clone(),
        ln_zeta_modulus: st.ln_zeta_modulus,
        phases: st.phases.clone(),
        tail_power: st.tail_power,
        alternating,
    };
    lattice_sum(&lat, spec)
}

/// `[ζ]^u Π_m Γ(z_m − u) Γ(u + w_m)` with `u = n/2 + ν`, `ū = −n/2 + ν`.
fn mb_profile<'a>(params: &'a MBParams, log: Option<Complex64>) -> impl Fn(i32) -> Terms + Sync + 'a {
    move |n2| {
        let h = n2 as f64 / 4.0;
        let mut t = Terms::default();
        if let Some(l) = log {
            t.kappa = l + l.conj();
            t.lambda = h * (l - l.conj());
        }
        for z in &params.z_list {
            t.push(-1.0, z.z() - h, z.zbar() + h);
        }
        for w in &params.w_list {
            t.push(1.0, w.z() + h, w.zbar() - h);
        }
        t
    }
}

fn check_sizes(n: usize, params: &MBParams, extra: usize) -> Result<(), GustafsonError> {
    if !(1..=2).contains(&n) {
        return Err(GustafsonError::Unsupported(format!("N = {n}; only N ∈ {{1, 2}}")));
    }
    if params.z_list.len() != n + extra || params.w_list.len() != n + extra {
        return Err(GustafsonError::InvalidSpec(format!(
            "expected {} z and w pairs, got {} and {}",
            n + extra,
            params.z_list.len(),
            params.w_list.len()
        )));
    }
    Ok(())
}

fn scaled(mut e: IntegralEstimate, f: Complex64) -> IntegralEstimate {
    e.value *= f;
    e.err *= f.norm();
    e
}

/// Lattice sum-plus-integral of the first identity (`N + 1` pairs each of `z` and `w`)
/// and its closed form.
pub fn gustafson_first(n: usize, params: &MBParams, spec: &MBSpec) -> Result<MBComparison, GustafsonError> {
    check_sizes(n, params, 1)?;
    let st = setup(n, params, spec, None)?;
    let rhs = gustafson_first_rhs(n, params)?;
    let r = run(n, &st, &mb_profile(params, None), true, spec)?;
    Ok(MBComparison {
        lhs: r.estimate,
        rhs,
        contour_shifts: st.shifts,
        partial_sums: r.partial_sums,
    })
}

/// Lattice sum-plus-integral of the second identity (`N` pairs each, weight `[ζ]^u`)
/// including its `1/N!`, and its closed form.
pub fn gustafson_second(n: usize, params: &MBParams, zeta: Complex64, spec: &MBSpec) -> Result<MBComparison, GustafsonError> {
    check_sizes(n, params, 0)?;
    let st = setup(n, params, spec, Some(zeta))?;
    let rhs = gustafson_second_rhs(params, zeta)?;
    let r = run(n, &st, &mb_profile(params, Some(log_zeta(zeta)?)), true, spec)?;
    let inv = c64(1.0 / factorial(n), 0.0);
    Ok(MBComparison {
        lhs: scaled(r.estimate, inv),
        rhs,
        contour_shifts: st.shifts,
        partial_sums: r.partial_sums.iter().map(|v| v * inv).collect(),
    })
}

/// Parameters of the second identity that reproduce `J_ω`:
/// `z = {ix_1, …, ix_{N−1}, Z − ω}`, `w = {−ix'_1, …, −ix'_{N−1}, Z − ω}`.
pub fn j_omega_params(x: &[SpectralPoint], x_prime: &[SpectralPoint], z: Complex64, omega: Complex64) -> MBParams {
    let zo = MBPair::scalar(z - omega);
    let mut z_list: Vec<MBPair> = x.iter().map(|p| p.times_i()).collect();
    z_list.push(zo);
    let mut w_list: Vec<MBPair> = x_prime.iter().map(|p| MBPair::new(p.n2, c64(0.0, -1.0) * p.nu)).collect();
    w_list.push(zo);
    MBParams { z_list, w_list }
}

/// Closed form of `J_ω(Z, ζ, x, x')` with `Z = Z̄`, `ω = ω̄`.
pub fn j_omega_rhs(x: &[SpectralPoint], x_prime: &[SpectralPoint], z: Complex64, omega: Complex64, zeta: Complex64) -> Result<Complex64, GustafsonError> {
    let lz = log_zeta(zeta)?;
    let l1 = (c64(1.0, 0.0) + zeta).ln();
    let i = c64(0.0, 1.0);
    let big_x: Complex64 = x.iter().map(|p| p.x()).sum();
    let big_xb: Complex64 = x.iter().map(|p| p.xbar()).sum();
    let big_xp: Complex64 = x_prime.iter().map(|p| p.x()).sum();
    let big_xpb: Complex64 = x_prime.iter().map(|p| p.xbar()).sum();
    let zo = z - omega;
    let mut sign = 0i64;
    for k in 0..x.len() {
        for j in k + 1..x.len() {
            sign += pair_sign_exponent(&x[k], &x[j])?;
        }
    }
    let mut v = c64(PI * if sign.rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0);
    v *= bracket_power(lz, zo + i * big_x, zo + i * big_xb);
    v /= bracket_power(l1, 2.0 * zo + i * (big_x - big_xp), 2.0 * zo + i * (big_xb - big_xpb));
    let gz = gamma_value(z, z)?;
    v *= gamma_value(2.0 * zo, 2.0 * zo)? / (gz * gz);
    for (xk, xpk) in x.iter().zip(x_prime) {
        v *= gamma_value(zo + i * xk.x(), zo + i * xk.xbar())?;
        v *= gamma_value(zo - i * xpk.x(), zo - i * xpk.xbar())?;
        v /= gz * gz;
    }
    for xk in x {
        for xpj in x_prime {
            v *= gamma_value(i * (xk.x() - xpj.x()), i * (xk.xbar() - xpj.xbar()))?;
        }
    }
    Ok(v)
}

/// `J_ω` for `N = |x| + 1 ≤ 2`: the printed integrand summed and integrated
/// directly, its closed form, and the value obtained through the second identity.
pub fn j_omega_check(
    x: &[SpectralPoint],
    x_prime: &[SpectralPoint],
    z: Complex64,
    omega: Complex64,
    zeta: Complex64,
    spec: &MBSpec,
) -> Result<JOmegaResult, GustafsonError> {
    if x.len() != x_prime.len() {
        return Err(GustafsonError::InvalidSpec("x and x' must have the same length".into()));
    }
    let n = x.len() + 1;
    let params = j_omega_params(x, x_prime, z, omega);
    check_sizes(n, &params, 0)?;
    let st = setup(n, &params, spec, Some(zeta))?;
    let lz = log_zeta(zeta)?;
    let i = c64(0.0, 1.0);
    let zo = z - omega;
    // y = im/2 + ν with m = −n and ν = −i·(contour variable), so iy = ν_c + iy(0)
    let direct = move |n2: i32| -> Terms {
        let y0 = c64(0.0, -(n2 as f64) / 4.0);
        let yb0 = -y0;
        let mut t = Terms {
            kappa: lz + lz.conj(),
            lambda: i * y0 * lz + i * yb0 * lz.conj(),
            ..Terms::default()
        };
        t.push(1.0, zo + i * y0, zo + i * yb0);
        t.push(-1.0, zo - i * y0, zo - i * yb0);
        for xk in x {
            t.push(-1.0, i * (xk.xbar() - yb0), i * (xk.x() - y0));
        }
        for xk in x_prime {
            t.push(1.0, i * (y0 - xk.x()), i * (yb0 - xk.xbar()));
        }
        t
    };
    let lhs = run(n, &st, &direct, false, spec)?;
    let second = run(n, &st, &mb_profile(&params, Some(lz)), true, spec)?;
    let gz = gamma_value(z, z)?;
    let norm = c64(PI / factorial(n), 0.0) / gz.powu(2 * n as u32);
    let mut sign = 0i64;
    for k in 0..x.len() {
        for j in k + 1..x.len() {
            sign += pair_sign_exponent(&x[k], &x[j])?;
        }
    }
    let via_second = if sign.rem_euclid(2) == 0 { 1.0 } else { -1.0 } * norm * second.estimate.value;
    Ok(JOmegaResult {
        comparison: MBComparison {
            lhs: scaled(lhs.estimate, norm),
            rhs: j_omega_rhs(x, x_prime, z, omega, zeta)?,
            contour_shifts: st.shifts,
            partial_sums: lhs.partial_sums.iter().map(|v| v * norm).collect(),
        },
        via_second,
    })
}

/// One evaluable identity.
#[derive(Clone, Debug, PartialEq)]
pub enum MBProblem {
    First { n: usize, params: MBParams },
    Second { n: usize, params: MBParams, zeta: Complex64 },
    JOmega {
        x: Vec<SpectralPoint>,
        x_prime: Vec<SpectralPoint>,
        z: Complex64,
        omega: Complex64,
        zeta: Complex64,
    },
}

impl MBProblem {
    pub fn evaluate(&self, spec: &MBSpec) -> Result<MBComparison, GustafsonError> {
        match self {
            MBProblem::First { n, params } => gustafson_first(*n, params, spec),
            MBProblem::Second { n, params, zeta } => gustafson_second(*n, params, *zeta, spec),
            MBProblem::JOmega { x, x_prime, z, omega, zeta } => Ok(j_omega_check(x, x_prime, *z, *omega, *zeta, spec)?.comparison),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n_max: usize,
    pub nu_cutoff: f64,
    pub lhs: Complex64,
    pub abs_err: f64,
}

/// Raw truncation errors. The `n_max` sweep compares partial sums with complete
/// ν integrals against the rhs. The cutoff sweep compares the ν-truncated sum at
/// the smallest `n_max` against the complete one at the same `n_max`; at a large
/// `n_max` the last shells' tails dominate it for every cutoff below `n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub rhs: Complex64,
    pub n_sweep: Vec<ConvergenceRow>,
    pub cutoff_sweep: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Errors do not grow after the first `burn_in` rows of each sweep,
    /// or are already below `floor`.
    pub fn is_monotone(&self, burn_in: usize, floor: f64) -> bool {
        let ok = |rows: &[ConvergenceRow]| {
            rows.iter()
                .skip(burn_in)
                .collect::<Vec<_>>()
                .windows(2)
                .all(|w| w[1].abs_err <= w[0].abs_err || w[1].abs_err < floor)
        };
        ok(&self.n_sweep) && ok(&self.cutoff_sweep)
    }
}

pub fn convergence_table(problem: &MBProblem, spec: &MBSpec, n_list: &[usize], cutoffs: &[f64]) -> Result<ConvergenceTable, GustafsonError> {
    let n_top = n_list.iter().copied().max().ok_or_else(|| GustafsonError::InvalidSpec("empty n_max list".into()))?;
    let full = MBSpec {
        n_max: n_top,
        nu_tails: true,
        n_extrapolate: false,
        ..spec.clone()
    };
    let r = problem.evaluate(&full)?;
    let n_sweep = n_list
        .iter()
        .map(|&k| ConvergenceRow {
            n_max: k,
            nu_cutoff: f64::INFINITY,
            lhs: r.partial_sums[k],
            abs_err: (r.partial_sums[k] - r.rhs).norm(),
        })
        .collect();
    let n_low = n_list.iter().copied().min().unwrap_or(n_top);
    let reference = r.partial_sums[n_low];
    let mut cutoff_sweep = Vec::new();
    for &lam in cutoffs {
        let s = MBSpec {
            n_max: n_low,
            nu_cutoff: lam,
            nu_tails: false,
            ..full.clone()
        };
        let e = problem.evaluate(&s)?;
        cutoff_sweep.push(ConvergenceRow {
            n_max: n_low,
            nu_cutoff: lam,
            lhs: e.lhs.value,
            abs_err: (e.lhs.value - reference).norm(),
        });
    }
    Ok(ConvergenceTable {
        rhs: r.rhs,
        n_sweep,
        cutoff_sweep,
    })
}
