//! Γ-prefactors, layer kernels, the SoV measure and normalization constants.

use std::f64::consts::PI;

use cfield::cgamma;
use num_complex::Complex64;
use plane::eval_propagator;

use crate::chain::{GammaVector, IndexPair, Kind, SeparatedPoint};
use crate::SovError;

/// Relative tolerance of the internal two-form self-checks.
pub const SELF_CHECK_TOL: f64 = 1e-10;

/// `Γ[u]` of an index pair, failing on poles.
pub fn gamma_of(u: &IndexPair) -> Result<Complex64, SovError> {
    let g = cgamma(&u.exponent()?);
    if g.is_pole {
        return Err(SovError::PoleEncountered);
    }
    Ok(g.value)
}

pub(crate) fn self_check(what: &str, x: Complex64, y: Complex64) -> Result<(), SovError> {
    let d = (x - y).norm() / x.norm().max(y.norm()).max(1e-300);
    if d > SELF_CHECK_TOL {
        return Err(SovError::SelfCheckFailed(what.to_string(), d));
    }
    Ok(())
}

/// `ϖ_1(x|γ) = ∏_m Γ[γ_{2m-1} - ix, γ̄_{2m} + ix̄]` over the complete pairs of `γ`.
pub fn varpi1(x: &SeparatedPoint, g: &GammaVector) -> Result<Complex64, SovError> {
    let mut r = Complex64::new(1.0, 0.0);
    for m in 1..=g.len() / 2 {
        r *= gamma_of(&g.at(2 * m - 1).minus_ix(x))?;
        r *= gamma_of(&g.at(2 * m).plus_ix(x).swap())?;
    }
    Ok(r)
}

/// `ϖ(x|γ) = ∏_{m=1}^{|x|} ∏_{k=1}^{m} ϖ_1(x_k|ρ^{m-1}γ)`.
pub fn varpi_prefactor(x: &[SeparatedPoint], g: &GammaVector) -> Result<Complex64, SovError> {
    let mut r = Complex64::new(1.0, 0.0);
    let mut gm = g.clone();
    for m in 1..=x.len() {
        if m > 1 {
            gm = crate::chain::rho_map(&gm)?;
        }
        for xk in &x[..m] {
            r *= varpi1(xk, &gm)?;
        }
    }
    Ok(r)
}

/// Both printed forms of `ω_n(γ, u, v)`: holomorphic-first and swapped.
pub fn omega_forms(g: &GammaVector, u: &SeparatedPoint, v: &SeparatedPoint) -> Result<(Complex64, Complex64), SovError> {
    if g.len() % 2 != 0 {
        return Err(SovError::InvalidSpec(format!("ω needs an even-length γ, got {}", g.len())));
    }
    let mut first = Complex64::new(1.0, 0.0);
    let mut second = Complex64::new(1.0, 0.0);
    for m in 1..=g.len() / 2 {
        let (o, e) = (g.at(2 * m - 1), g.at(2 * m));
        first *= gamma_of(&o.minus_ix(v))? * gamma_of(&e.plus_ix(v).swap())?
            / (gamma_of(&o.minus_ix(u))? * gamma_of(&e.plus_ix(u).swap())?);
        second *= gamma_of(&o.minus_ix(v).swap())? * gamma_of(&e.plus_ix(v))?
            / (gamma_of(&o.minus_ix(u).swap())? * gamma_of(&e.plus_ix(u))?);
    }
    Ok((first, second))
}

/// `ω_n(γ, u, v)`, checked against its second printed form.
pub fn omega_factor(g: &GammaVector, u: &SeparatedPoint, v: &SeparatedPoint) -> Result<Complex64, SovError> {
    let (a, b) = omega_forms(g, u, v)?;
    self_check("omega", a, b)?;
    Ok(a)
}

/// Kernel of `Λ_n(x|γ)` (B) or `Λ'_n(x|γ)` (A) at points `zs` (n of them) and `ws` (n-1).
pub fn lambda_kernel(
    kind: Kind,
    n: usize,
    x: &SeparatedPoint,
    g: &GammaVector,
    zs: &[Complex64],
    ws: &[Complex64],
) -> Result<Complex64, SovError> {
    let need = match kind {
        Kind::B => 2 * n - 2,
        Kind::A => 2 * n - 1,
    };
    if n == 0 || zs.len() != n || ws.len() + 1 != n || g.len() < need {
        return Err(SovError::InvalidSpec(format!(
            "Λ_{n} needs {n} z-points, {} w-points and {need} γ-entries",
            n.saturating_sub(1)
        )));
    }
    let mut r = Complex64::new(1.0, 0.0);
    for k in 1..n {
        r *= eval_propagator(&g.at(2 * k - 1).minus_ix(x).exponent()?, zs[k - 1] - ws[k - 1])?;
        r *= eval_propagator(&g.at(2 * k).plus_ix(x).exponent()?, zs[k] - ws[k - 1])?;
    }
    if kind == Kind::A {
        r *= eval_propagator(&g.at(2 * n - 1).minus_ix(x).exponent()?, zs[n - 1])?;
    }
    Ok(r)
}

/// `μ(x) = ∏_{k<j} (ν_kj² + n_kj²/4)` on real separated points.
pub fn measure_mu(x: &[SeparatedPoint]) -> f64 {
    let mut r = 1.0;
    for k in 0..x.len() {
        for j in k + 1..x.len() {
            let nu = x[k].nu.re - x[j].nu.re;
            let n = x[k].n() - x[j].n();
            r *= nu * nu + n * n / 4.0;
        }
    }
    r
}

/// `c_N^B = 2 / ((2π)^{N+1} N!)` and `c_N^A = 1 / ((2π)^N N!)`.
pub fn sov_constants(n: usize, kind: Kind) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    match kind {
        Kind::B => 2.0 / ((2.0 * PI).powi(n as i32 + 1) * fact),
        Kind::A => 1.0 / ((2.0 * PI).powi(n as i32) * fact),
    }
}
