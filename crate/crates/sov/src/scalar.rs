//! Closed forms of the scalar products, the B–B momentum diagram they reduce
//! from, and the quadrature oracles used to check them.

use std::f64::consts::PI;

use cfield::{c64, FieldExponent};
use diagrams::{ClosedFormFactor, Diagram, Position};
use num_complex::Complex64;
use plane::{fourier_propagator, integrate_c2, IntegralEstimate, QuadratureSpec};

use crate::chain::{GammaVector, IndexPair, SeparatedPoint};
use crate::factors::{self_check, varpi1, varpi_prefactor};
use crate::psi::{lines_value, momentum_form};
use crate::SovError;

/// Distance from the negative real axis below which a non-integer power is rejected.
pub const BRANCH_CUT_TOL: f64 = 1e-6;

const INTEGER_TOL: f64 = 1e-9;

/// Adds `(ε, ε)` to the last entry, the momentum-space effect of `ξ_N → ξ_N − iε`.
pub fn regulate(g: &GammaVector, eps: f64) -> GammaVector {
    let mut out = g.clone();
    if let Some(last) = out.entries.last_mut() {
        *last = last.shift(c64(eps, 0.0));
    }
    out
}

fn sum_pairs(x: &[SeparatedPoint]) -> (Complex64, Complex64) {
    x.iter().fold((c64(0.0, 0.0), c64(0.0, 0.0)), |(a, b), p| (a + p.x(), b + p.xbar()))
}

/// `(-1)^{round(s)}`, failing if `s` is not an integer.
fn parity_of(s: Complex64) -> Result<i32, SovError> {
    let r = s.re.round();
    if (s - c64(r, 0.0)).norm() > INTEGER_TOL {
        return Err(SovError::NonIntegerIndex { a: s, abar: c64(0.0, 0.0) });
    }
    Ok(if (r as i64).rem_euclid(2) == 0 { 1 } else { -1 })
}

/// `𝒞_N(γ)`: 1 for odd N, `(-1)^{Σ_{k=1}^{N-3} [γ^{(k-1)}_{2N-2-k} − γ^{(N-3)}_N]}` for even N.
pub fn bb_sign(g: &GammaVector) -> Result<i32, SovError> {
    let n = g.len() / 2 + 1;
    if n % 2 == 1 {
        return Ok(1);
    }
    let mut s = c64(0.0, 0.0);
    for k in 1..=n.saturating_sub(3) {
        s += g.at(2 * n - 2 - k).reflect_n(k - 1).bracket() - g.at(n).reflect_n(n - 3).bracket();
    }
    parity_of(s)
}

/// Arguments `γ^{(k)}_{2N-3-k} − ix`, `k = 0..N-3`, of `φ_N(x)`.
fn phi_args(x: &SeparatedPoint, g: &GammaVector) -> Vec<IndexPair> {
    let n = g.len() / 2 + 1;
    (0..n.saturating_sub(2)).map(|k| g.at(2 * n - 3 - k).reflect_n(k).minus_ix(x)).collect()
}

/// `(i(y* − x̄), i(ȳ* − x))`.
fn cross_pair(y: &SeparatedPoint, x: &SeparatedPoint) -> IndexPair {
    let i = c64(0.0, 1.0);
    IndexPair::new(i * (y.x().conj() - x.xbar()), i * (y.xbar().conj() - x.x()))
}

fn times(f: ClosedFormFactor, u: &IndexPair, mult: i32) -> Result<ClosedFormFactor, SovError> {
    Ok(f.times_gamma(u.exponent()?, mult))
}

/// Both printed forms of `I^{ε,ε'}(x, y)` as Γ-products.
pub fn scalar_bb_forms(
    x: &[SeparatedPoint],
    y: &[SeparatedPoint],
    g: &GammaVector,
    eps: f64,
    eps_prime: f64,
) -> Result<(ClosedFormFactor, ClosedFormFactor), SovError> {
    let n = g.len() / 2 + 1;
    if g.len() % 2 != 0 || x.len() != n - 1 || y.len() != n - 1 {
        return Err(SovError::InvalidSpec("B–B product needs |x| = |y| = N − 1 and |γ| = 2N − 2".into()));
    }
    let e = eps + eps_prime;
    if !(e > 0.0) {
        return Err(SovError::InvalidSpec("ε + ε' must be positive".into()));
    }
    let i = c64(0.0, 1.0);
    let (sx, sxb) = sum_pairs(x);
    let (sy, syb) = sum_pairs(y);
    let t = IndexPair::new(i * (sx - syb.conj()), i * (sxb - sy.conj()));
    let ee = IndexPair::scalar(c64(e, 0.0));
    let sign = bb_sign(g)?;

    let mut first = ClosedFormFactor::one().times_sign(sign);
    first = times(first, &(ee + t), 1)?;
    first = times(first, &ee, -1)?;
    let mut second = ClosedFormFactor::one().times_sign(sign);
    second = times(second, &(ee + t.swap()), 1)?;
    second = times(second, &ee, -1)?;
    for yk in y {
        for xj in x {
            let u = cross_pair(yk, xj);
            first = times(first, &u, 1)?;
            second = times(second, &u.swap(), 1)?;
        }
    }
    for xk in x {
        for u in phi_args(xk, g) {
            first = times(first, &u.swap(), -1)?;
            second = times(second, &u, -1)?;
        }
    }
    for yk in y {
        for u in phi_args(yk, g) {
            first = times(first, &u.conj(), -1)?;
            second = times(second, &u.conj_swap(), -1)?;
        }
    }
    Ok((first, second))
}

/// `I^{ε,ε'}(x, y)` in canonical form, after checking the two printed forms agree.
pub fn scalar_bb_closed(
    x: &[SeparatedPoint],
    y: &[SeparatedPoint],
    g: &GammaVector,
    eps: f64,
    eps_prime: f64,
) -> Result<ClosedFormFactor, SovError> {
    let (a, b) = scalar_bb_forms(x, y, g, eps, eps_prime)?;
    let va = a.eval_constant().map_err(pole)?;
    let vb = b.eval_constant().map_err(pole)?;
    self_check("B–B scalar product", va, vb)?;
    Ok(a.canonical())
}

fn pole(e: diagrams::DiagramError) -> SovError {
    match e {
        diagrams::DiagramError::PoleEncountered => SovError::PoleEncountered,
        other => SovError::Diagram(other),
    }
}

/// Momentum diagram of `I^{ε,ε'}(x, y)` for `N ∈ {2, 3}`: the diagram of
/// `Ψ^ε_x` glued to the conjugate diagram of `Ψ^{ε'}_y` along the momenta.
/// `g` is the unregulated γ.
pub fn scalar_bb_diagram(
    x: &[SeparatedPoint],
    y: &[SeparatedPoint],
    g: &GammaVector,
    eps: f64,
    eps_prime: f64,
) -> Result<Diagram, SovError> {
    let n = x.len() + 1;
    if !(2..=3).contains(&n) || y.len() != x.len() {
        return Err(SovError::Unsupported(format!("B–B diagram for N = {n}")));
    }
    let fx = momentum_form(x, &regulate(g, eps))?;
    let fy = momentum_form(y, &regulate(g, eps_prime))?;
    let e = eps + eps_prime;
    let pref = fx
        .prefactor
        .mul(&fy.prefactor.conj())
        .times_pi(2 * n as i32 - (n * n) as i32 - 1)
        .times_momentum("p", FieldExponent::scalar(c64(e - (n as f64 - 1.0), 0.0)));
    let mut d = Diagram::new()
        .with_external("O", Position::Point(c64(0.0, 0.0)))
        .with_external("P", Position::Momentum("p".into()))
        .with_internal("a");
    if n == 3 {
        d = d.with_internal("b").with_internal("L").with_internal("M");
    }
    for l in &fx.lines {
        d = d.with_edge(l.from, l.to, l.alpha);
    }
    let rename = |s: &'static str| if s == "L" { "M" } else { s };
    for l in &fy.lines {
        d = d.with_edge(rename(l.from), rename(l.to), l.alpha.conj_swap());
    }
    Ok(d.with_prefactor(pref))
}

/// Direct quadrature of `I^{ε,ε'}(x, y)` at `N = 2`:
/// `π^{-1} |p|^{-2(ε+ε')} ∫ d²p_1 Ψ^ε_x(p_1, p − p_1) conj Ψ^{ε'}_y(p_1, p − p_1)`.
pub fn scalar_bb_quadrature(
    x: &[SeparatedPoint],
    y: &[SeparatedPoint],
    g: &GammaVector,
    eps: f64,
    eps_prime: f64,
    p: Complex64,
    quad: &QuadratureSpec,
) -> Result<IntegralEstimate, SovError> {
    if x.len() != 1 || y.len() != 1 || g.len() != 2 {
        return Err(SovError::Unsupported("B–B quadrature is implemented for N = 2".into()));
    }
    let fx = momentum_form(x, &regulate(g, eps))?;
    let fy = momentum_form(y, &regulate(g, eps_prime))?;
    let c = fx.prefactor.eval_constant().map_err(pole)? * fy.prefactor.eval_constant().map_err(pole)?.conj();
    let f = |w: &[Complex64]| -> Complex64 {
        let ms = [w[0], p - w[0]];
        match (lines_value(&fx, &ms), lines_value(&fy, &ms)) {
            (Ok(a), Ok(b)) => a * b.conj(),
            _ => c64(f64::NAN, 0.0),
        }
    };
    let q = quad.clone().with_centers(&[c64(0.0, 0.0), p]);
    let mut est = integrate_c2(&f, 1, &q)?;
    let scale = c * p.norm().powf(2.0 - 2.0 * (eps + eps_prime)) / PI;
    est.value *= scale;
    est.err *= scale.norm();
    Ok(est)
}

/// `base^{-a} conj(base)^{-ā}` on the principal branch.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPower {
    pub base: Complex64,
    pub exponent: IndexPair,
}

impl BranchPower {
    pub fn value(&self) -> Result<Complex64, SovError> {
        if self.base.norm() == 0.0 {
            return Err(SovError::PoleEncountered);
        }
        let d = self.exponent.bracket();
        let integer = (d - c64(d.re.round(), 0.0)).norm() <= INTEGER_TOL;
        if !integer && self.base.re < 0.0 && self.base.im.abs() <= BRANCH_CUT_TOL * self.base.norm() {
            return Err(SovError::BranchCutHit(self.base));
        }
        let l = self.base.ln();
        Ok((-self.exponent.a * l - self.exponent.abar * l.conj()).exp())
    }
}

/// A Γ-product times principal-branch powers of momenta.
#[derive(Clone, Debug)]
pub struct ClosedProduct {
    pub factor: ClosedFormFactor,
    pub powers: Vec<BranchPower>,
}

impl ClosedProduct {
    pub fn value(&self) -> Result<Complex64, SovError> {
        let mut v = self.factor.eval_constant().map_err(pole)?;
        for p in &self.powers {
            v *= p.value()?;
        }
        Ok(v)
    }
}

/// `G_N = Σ_{m=N}^{2N-1} γ^{(m)}_m` (with `from` replacing the lower bound `N`).
fn g_sum(g: &GammaVector, from: usize, to: usize) -> IndexPair {
    (from..=to).fold(IndexPair::scalar(c64(0.0, 0.0)), |acc, m| acc + g.at(m).reflect_n(m))
}

fn abs_power(base: Complex64, k: f64) -> BranchPower {
    BranchPower {
        base,
        exponent: IndexPair::scalar(c64(-k / 2.0, 0.0)),
    }
}

/// `(Ψ^{(N)}_{p,y} | Φ^{(N)}_x)` for `|x| = N`, `|y| = N − 1` and the A-kind γ (length `2N − 1`).
pub fn scalar_ab_closed(
    x: &[SeparatedPoint],
    y: &[SeparatedPoint],
    g: &GammaVector,
    p: Complex64,
) -> Result<ClosedProduct, SovError> {
    let n = x.len();
    if n == 0 || y.len() + 1 != n || g.len() != 2 * n - 1 {
        return Err(SovError::InvalidSpec("A–B product needs |x| = N, |y| = N − 1, |γ| = 2N − 1".into()));
    }
    for xk in x {
        for yj in y {
            if !(xk.nu.im + yj.nu.im > 0.0) {
                return Err(SovError::ConvergenceDomainViolated(format!(
                    "Im(ν + μ) = {} must be positive",
                    xk.nu.im + yj.nu.im
                )));
            }
        }
    }
    let sign = if n % 2 == 1 {
        1
    } else {
        let mut s = c64(0.0, 0.0);
        for k in 1..=n {
            s += g.at(2 * n - k).reflect_n(k - 1).bracket() - g.at(n).reflect_n(n - 1).bracket();
        }
        parity_of(s)?
    };
    let mut f = ClosedFormFactor::one().times_sign(sign);
    for xk in x {
        for yj in y {
            f = times(f, &cross_pair(yj, xk).swap(), 1)?;
        }
    }
    let theta = |v: &SeparatedPoint| -> Vec<IndexPair> { (1..=n).map(|k| g.at(2 * n - k).reflect_n(k - 1).minus_ix(v)).collect() };
    for xj in x {
        for u in theta(xj) {
            f = times(f, &u, -1)?;
        }
    }
    for yj in y {
        for u in theta(yj) {
            f = times(f, &u.conj_swap(), -1)?;
        }
    }
    let i = c64(0.0, 1.0);
    let (sx, sxb) = sum_pairs(x);
    let gn = g_sum(g, n, 2 * n - 1);
    let powers = vec![
        abs_power(p, (n - 1) as f64),
        BranchPower {
            base: -i * p,
            exponent: gn + IndexPair::new(i * sx, i * sxb),
        },
    ];
    Ok(ClosedProduct { factor: f, powers })
}

/// Oracle for the A–B product at `N = 1`: `π^{-1} ∫ d²z e^{-i(pz + p̄z̄)} D_{γ_1 − ix}(z)`.
pub fn scalar_ab_fourier_n1(x: &SeparatedPoint, g: &GammaVector, p: Complex64, quad: &QuadratureSpec) -> Result<Complex64, SovError> {
    if g.len() != 1 {
        return Err(SovError::InvalidSpec("N = 1 A-kind γ has one entry".into()));
    }
    let a = g.at(1).minus_ix(x).exponent()?;
    let f = fourier_propagator(&a, -p, quad)?;
    Ok(varpi_prefactor(std::slice::from_ref(x), g)? * f.value / PI)
}

/// `(Ψ^{(N)}_{q_1,y} ⊗ Ψ^{(1)}_{q_2}, Ψ^{(N+1)}_{p,x})` with the factor `πδ²(p − q_1 − q_2)`
/// stripped; `|y| = N − 1`, `|x| = N`, γ of length `2N`.
pub fn scalar_mixed_closed(
    y: &[SeparatedPoint],
    x: &[SeparatedPoint],
    g: &GammaVector,
    q1: Complex64,
    q2: Complex64,
) -> Result<ClosedProduct, SovError> {
    let n = x.len();
    if n == 0 || y.len() + 1 != n || g.len() != 2 * n {
        return Err(SovError::InvalidSpec("mixed product needs |x| = N, |y| = N − 1, |γ| = 2N".into()));
    }
    let sign = if n % 2 == 1 {
        1
    } else {
        let mut s = c64(0.0, 0.0);
        for k in 1..n {
            s += g.at(2 * n - k).reflect_n(k - 1).bracket() - g.at(n).reflect_n(n - 1).bracket();
        }
        parity_of(s)?
    };
    let mut f = ClosedFormFactor::one().times_sign(sign);
    for yk in y {
        for xj in x {
            f = times(f, &cross_pair(yk, xj).swap(), 1)?;
        }
    }
    for xj in x {
        for k in 1..n {
            f = times(f, &g.at(2 * n - k).reflect_n(k - 1).minus_ix(xj), -1)?;
        }
    }
    for k in 1..=n {
        for yj in y {
            f = times(f, &g.at(2 * n - k).reflect_n(k - 1).minus_ix(yj).conj_swap(), -1)?;
        }
    }
    let i = c64(0.0, 1.0);
    let p = q1 + q2;
    let (sx, sxb) = sum_pairs(x);
    let (sy, syb) = sum_pairs(y);
    let gn = g_sum(g, n, 2 * n - 1);
    let gn1 = g_sum(g, n + 1, 2 * n - 1);
    // 1 + q1/q2 = ip/(iq2) and −q2/q1 = iq2/(−iq1): the printed powers are
    // regrouped by momentum so that every exponent pair differs by an integer.
    let yp = IndexPair::new(-i * syb.conj(), -i * sy.conj());
    let xp = IndexPair::new(-i * sx, -i * sxb);
    let powers = vec![
        abs_power(p, n as f64),
        abs_power(q1, (n - 1) as f64),
        BranchPower {
            base: i * p,
            exponent: gn1.conj_swap() + yp,
        },
        BranchPower {
            base: i * q2,
            exponent: g.at(2 * n).reflect() - yp + xp,
        },
        BranchPower {
            base: -i * q1,
            exponent: gn - xp,
        },
    ];
    Ok(ClosedProduct { factor: f, powers })
}

/// Oracle for the mixed product at `N = 1`: `π^{-2} |p| ϖ_1(x|γ) F_A(−q_1) F_B(−q_2)` with
/// `F_α(k) = ∫ d²z e^{i(kz + k̄z̄)} D_α(z)`, `A = γ_1 − ix`, `B = γ_2 + ix`.
pub fn scalar_mixed_quadrature_n1(
    x: &SeparatedPoint,
    g: &GammaVector,
    q1: Complex64,
    q2: Complex64,
    quad: &QuadratureSpec,
) -> Result<Complex64, SovError> {
    if g.len() != 2 {
        return Err(SovError::InvalidSpec("N = 1 mixed product needs a γ of length 2".into()));
    }
    let a = g.at(1).minus_ix(x).exponent()?;
    let b = g.at(2).plus_ix(x).exponent()?;
    let fa = fourier_propagator(&a, -q1, quad)?.value;
    let fb = fourier_propagator(&b, -q2, quad)?.value;
    Ok((q1 + q2).norm() * varpi1(x, g)? * fa * fb / (PI * PI))
}
