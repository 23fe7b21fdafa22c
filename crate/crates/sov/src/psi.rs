//! Eigenfunctions: Ψ in momentum space, Φ in position space, and the
//! eigen-relations of Ψ at N = 2 checked by differentiating under the integral.

use std::collections::HashMap;
use std::f64::consts::PI;

use cfield::{c64, FieldExponent};
use diagrams::{numeric_eval, ClosedFormFactor, Diagram, Position};
use num_complex::Complex64;
use plane::{
    eval_propagator, fourier_closed, integrate_c2, plane_wave_integral, plane_wave_sum, IntegralEstimate, QuadratureSpec, WaveFactor,
    WaveTerm,
};

use crate::chain::{rho_map, EigenfunctionSpec, GammaVector, IndexPair, Kind, SeparatedPoint};
use crate::factors::{lambda_kernel, varpi_prefactor};
use crate::SovError;

/// One propagator `D_α(to − from)` of the momentum diagram of Ψ.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumLine {
    pub from: &'static str,
    pub to: &'static str,
    pub alpha: FieldExponent,
}

/// Momentum-space Ψ without its `π^{N - N²/2} |p|^{N-1}` normalization:
/// a Γ-prefactor times propagators between the dual points
/// `O = 0`, `a = p_1`, `b = p_1 + p_2`, `P = p` and the loop vertex `L`.
#[derive(Clone, Debug)]
pub struct MomentumForm {
    pub prefactor: ClosedFormFactor,
    pub lines: Vec<MomentumLine>,
}

/// `Γ`-exponents of `ϖ(x|γ)`.
pub fn varpi_exponents(x: &[SeparatedPoint], g: &GammaVector) -> Result<Vec<FieldExponent>, SovError> {
    let mut out = Vec::new();
    let mut gm = g.clone();
    for m in 1..=x.len() {
        if m > 1 {
            gm = rho_map(&gm)?;
        }
        for xk in &x[..m] {
            for j in 1..=gm.len() / 2 {
                out.push(gm.at(2 * j - 1).minus_ix(xk).exponent()?);
                out.push(gm.at(2 * j).plus_ix(xk).swap().exponent()?);
            }
        }
    }
    Ok(out)
}

/// Momentum diagram of `Ψ^{(N)}_x` for `N ≤ 3`. `g` is the (possibly regulated) B-kind γ.
pub fn momentum_form(x: &[SeparatedPoint], g: &GammaVector) -> Result<MomentumForm, SovError> {
    let n = x.len() + 1;
    if g.len() != 2 * n - 2 {
        return Err(SovError::InvalidSpec(format!("γ has length {}, expected {}", g.len(), 2 * n - 2)));
    }
    // (α, u, v): the line carries D_{1-α}(u - v).
    let raw: Vec<(IndexPair, &'static str, &'static str)> = match n {
        1 => Vec::new(),
        2 => vec![(g.at(1).minus_ix(&x[0]), "O", "a"), (g.at(2).plus_ix(&x[0]), "a", "P")],
        3 => {
            let r = rho_map(g)?;
            vec![
                (g.at(1).minus_ix(&x[0]), "O", "a"),
                (g.at(2).plus_ix(&x[0]), "a", "L"),
                (g.at(3).minus_ix(&x[0]), "L", "b"),
                (g.at(4).plus_ix(&x[0]), "b", "P"),
                (r.at(1).minus_ix(&x[1]), "O", "L"),
                (r.at(2).plus_ix(&x[1]), "L", "P"),
            ]
        }
        _ => return Err(SovError::Unsupported(format!("momentum-space Ψ for N = {n}"))),
    };
    let mut prefactor = ClosedFormFactor::one();
    for u in varpi_exponents(x, g)? {
        prefactor = prefactor.times_gamma(u, 1);
    }
    let mut lines = Vec::new();
    for (al, u, v) in raw {
        let e = al.exponent()?;
        prefactor = prefactor.times_i(e.m()).times_a(e);
        lines.push(MomentumLine {
            from: v,
            to: u,
            alpha: e.reflect(),
        });
    }
    Ok(MomentumForm { prefactor, lines })
}

fn dual_points(momenta: &[Complex64]) -> HashMap<&'static str, Complex64> {
    let mut pts = HashMap::from([("O", c64(0.0, 0.0))]);
    let p: Complex64 = momenta.iter().sum();
    pts.insert("P", p);
    if momenta.len() >= 2 {
        pts.insert("a", momenta[0]);
    }
    if momenta.len() >= 3 {
        pts.insert("b", momenta[0] + momenta[1]);
    }
    pts
}

/// `Ψ^{(N),ε}_x(p_1, …, p_N)` (momentum conservation stripped), `N ≤ 3`.
/// The regulator is `spec.chain.epsilon`.
pub fn psi_momentum_eval(
    spec: &EigenfunctionSpec,
    momenta: &[Complex64],
    quad: &QuadratureSpec,
) -> Result<IntegralEstimate, SovError> {
    if spec.kind != Kind::B {
        return Err(SovError::InvalidSpec("momentum-space Ψ needs a B-kind spec".into()));
    }
    spec.validate()?;
    let n = spec.chain.n;
    if momenta.len() != n {
        return Err(SovError::InvalidSpec(format!("{} momenta for N = {n}", momenta.len())));
    }
    let p: Complex64 = momenta.iter().sum();
    let norm = PI.powf(n as f64 - (n * n) as f64 / 2.0) * p.norm().powi(n as i32 - 1);
    if n == 1 {
        let v = norm * momenta[0].norm().powf(2.0 * spec.chain.epsilon);
        return Ok(exact(c64(v, 0.0)));
    }
    let form = momentum_form(&spec.separated, &spec.gamma()?)?;
    let pts = dual_points(momenta);
    let mut d = Diagram::new();
    for (k, v) in pts.iter() {
        d = d.with_external(k, Position::Point(*v));
    }
    d.external.sort_by(|a, b| a.label.cmp(&b.label));
    if n == 3 {
        d = d.with_internal("L");
    }
    for l in &form.lines {
        d = d.with_edge(l.from, l.to, l.alpha);
    }
    let d = d.with_prefactor(form.prefactor);
    let mut est = numeric_eval(&d, &HashMap::new(), quad)?;
    est.value *= norm;
    est.err *= norm;
    Ok(est)
}

fn exact(v: Complex64) -> IntegralEstimate {
    IntegralEstimate {
        value: v,
        err: 0.0,
        evals: 0,
        converged: true,
    }
}

/// `Φ^{(N)}_x(z) = π^{-N²/2} ϖ [Λ'_N(x_1|γ) ⋯ Λ'_1(x_N|ρ^{N-1}γ)](z)` for `N ≤ 2`.
pub fn phi_position_eval(spec: &EigenfunctionSpec, zs: &[Complex64], quad: &QuadratureSpec) -> Result<IntegralEstimate, SovError> {
    if spec.kind != Kind::A {
        return Err(SovError::InvalidSpec("Φ needs an A-kind spec".into()));
    }
    spec.validate()?;
    let n = spec.chain.n;
    if zs.len() != n {
        return Err(SovError::InvalidSpec(format!("{} points for N = {n}", zs.len())));
    }
    let g = spec.gamma()?;
    let x = &spec.separated;
    let pref = PI.powf(-((n * n) as f64) / 2.0) * varpi_prefactor(x, &g)?;
    match n {
        1 => Ok(exact(pref * lambda_kernel(Kind::A, 1, &x[0], &g, zs, &[])?)),
        2 => {
            let r = rho_map(&g)?;
            // Check the exponents once so the integrand can skip the error paths.
            for (k, e) in g.entries.iter().enumerate() {
                if k % 2 == 0 { e.minus_ix(&x[0]) } else { e.plus_ix(&x[0]) }.exponent()?;
            }
            r.at(1).minus_ix(&x[1]).exponent()?;
            let f = |w: &[Complex64]| -> Complex64 {
                let outer = lambda_kernel(Kind::A, 2, &x[0], &g, zs, &[w[0]]).unwrap_or(c64(f64::NAN, 0.0));
                let inner = lambda_kernel(Kind::A, 1, &x[1], &r, &[w[0]], &[]).unwrap_or(c64(f64::NAN, 0.0));
                outer * inner
            };
            let q = quad.clone().with_centers(&[c64(0.0, 0.0), zs[0], zs[1]]);
            let mut est = integrate_c2(&f, 1, &q)?;
            est.value *= pref;
            est.err *= pref.norm();
            Ok(est)
        }
        _ => Err(SovError::Unsupported(format!("position-space Φ for N = {n}"))),
    }
}

/// Position-space `Ψ^{(2)}_{p,x}` at `N = 2` split into the four integrals
/// `∫ e^{i(pw + p̄w̄)} D_{A+j}(z_1 − w) D_{B+k}(z_2 − w)`, `j, k ∈ {0, 1}`,
/// with `A = γ_1 − ix_1`, `B = γ_2 + ix_1`.
#[derive(Clone, Debug)]
pub struct PsiDerivatives {
    pub norm: Complex64,
    pub a: FieldExponent,
    pub b: FieldExponent,
    /// `Ψ`, `∂_1Ψ`, `∂_2Ψ`, `∂_1∂_2Ψ` (normalization included).
    pub psi: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d12: Complex64,
    pub evals: usize,
}

fn check_n2(spec: &EigenfunctionSpec, zs: &[Complex64]) -> Result<(), SovError> {
    if spec.kind != Kind::B || spec.chain.n != 2 || zs.len() != 2 {
        return Err(SovError::Unsupported("eigen-relation checks need a B-kind spec with N = 2 and two points".into()));
    }
    spec.validate()?;
    if spec.p.norm() == 0.0 {
        return Err(SovError::InvalidSpec("momentum p must be nonzero".into()));
    }
    Ok(())
}

/// Ψ and its holomorphic derivatives at `zs`, differentiating the kernel
/// analytically: `∂_z D_α(z) = −a D_{α+(1,0)}(z)`.
pub fn psi_derivatives(spec: &EigenfunctionSpec, zs: &[Complex64], quad: &QuadratureSpec) -> Result<PsiDerivatives, SovError> {
    check_n2(spec, zs)?;
    let g = spec.gamma()?;
    let x = &spec.separated;
    let a = g.at(1).minus_ix(&x[0]).exponent()?;
    let b = g.at(2).plus_ix(&x[0]).exponent()?;
    let one = FieldExponent::from_mw(1, c64(0.5, 0.0));
    for u in [a + one, b + one] {
        if u.m() == 0 {
            return Err(SovError::InvalidSpec(
                "derivative kernel has a non-oscillating |z|^-2 singularity ([A] or [B] = -1)".into(),
            ));
        }
    }
    let norm = PI.powi(-2) * spec.p.norm() * varpi_prefactor(x, &g)?;
    let mut evals = 0;
    let mut int = |al: FieldExponent, be: FieldExponent| -> Result<Complex64, SovError> {
        let e = wave_pair(spec.p, (al, zs[0]), (be, zs[1]), quad)?;
        evals += e.evals;
        Ok(e.value)
    };
    let i0 = int(a, b)?;
    let i1 = int(a + one, b)?;
    let i2 = int(a, b + one)?;
    let i12 = int(a + one, b + one)?;
    Ok(PsiDerivatives {
        norm,
        a,
        b,
        psi: norm * i0,
        d1: -norm * a.a() * i1,
        d2: -norm * b.a() * i2,
        d12: norm * a.a() * b.a() * i12,
        evals,
    })
}

/// `∫ e^{i(pw + p̄w̄)} D_α(c_1 − w) D_β(c_2 − w)`. A factor with `Re w ≥ 1` is
/// integrable only after angular averaging; its value at the other center is
/// subtracted under the integral and the subtraction added back in closed form.
fn wave_pair(
    p: Complex64,
    (al, c1): (FieldExponent, Complex64),
    (be, c2): (FieldExponent, Complex64),
    quad: &QuadratureSpec,
) -> Result<IntegralEstimate, SovError> {
    let mut terms = vec![WaveTerm {
        coeff: c64(1.0, 0.0),
        factors: vec![WaveFactor::new(al, c1), WaveFactor::new(be, c2)],
    }];
    let mut closed = c64(0.0, 0.0);
    for (x, cx, y, cy) in [(al, c1, be, c2), (be, c2, al, c1)] {
        if x.w().re >= 1.0 - 1e-12 {
            let k = eval_propagator(&y, cy - cx)?;
            terms.push(WaveTerm {
                coeff: -k,
                factors: vec![WaveFactor::new(x, cx)],
            });
            let phase = Complex64::from_polar(1.0, 2.0 * (p * cx).re);
            closed += k * phase * fourier_closed(&x, -p)?;
        }
    }
    let mut e = plane_wave_sum(p, &terms, quad)?;
    e.value += closed;
    Ok(e)
}

impl PsiDerivatives {
    /// `iS^−Ψ = −i(∂_1 + ∂_2)Ψ`.
    pub fn translation(&self) -> Complex64 {
        c64(0.0, -1.0) * (self.d1 + self.d2)
    }

    /// `B_2(u)Ψ` with `B_2(u) = (u + ξ_1 + iS_1^0)(iS_2^−) + (iS_1^−)(u + ξ_2 − iS_2^0)`.
    pub fn b_action(&self, spec: &EigenfunctionSpec, u: Complex64, zs: &[Complex64]) -> Complex64 {
        let i = c64(0.0, 1.0);
        let xi1 = spec.chain.impurities[0].value();
        let xi2 = spec.chain.impurities[1].value();
        let s1 = spec.chain.spin_pair(0).a;
        let s2 = spec.chain.spin_pair(1).a;
        -i * (u + xi1) * self.d2 - i * (u + xi2) * self.d1 + (zs[0] - zs[1]) * self.d12 + s1 * self.d2 - s2 * self.d1
    }
}

/// `|iS^−Ψ − pΨ| / |pΨ|` at `N ≤ 2`.
pub fn eigen_translation_check(spec: &EigenfunctionSpec, zs: &[Complex64], quad: &QuadratureSpec) -> Result<f64, SovError> {
    if spec.kind == Kind::B && spec.chain.n == 1 && zs.len() == 1 {
        spec.validate()?;
        // Ψ = π^{-1/2} e^{i(pz + p̄z̄)}, ∂Ψ = ipΨ
        let psi = Complex64::from_polar(PI.powf(-0.5), 2.0 * (spec.p * zs[0]).re);
        let rhs = spec.p * psi;
        let lhs = c64(0.0, -1.0) * (c64(0.0, 1.0) * spec.p * psi);
        return Ok((lhs - rhs).norm() / rhs.norm());
    }
    let d = psi_derivatives(spec, zs, quad)?;
    let rhs = spec.p * d.psi;
    Ok((d.translation() - rhs).norm() / rhs.norm())
}

/// `|B_2(u)Ψ − p(u − x_1)Ψ| / |p(u − x_1)Ψ|`; at `u = x_1` the absolute value `|B_2(x_1)Ψ|`.
pub fn eigen_b_check(spec: &EigenfunctionSpec, u: Complex64, zs: &[Complex64], quad: &QuadratureSpec) -> Result<f64, SovError> {
    let d = psi_derivatives(spec, zs, quad)?;
    Ok(b_residual(&d, spec, u, zs))
}

pub fn b_residual(d: &PsiDerivatives, spec: &EigenfunctionSpec, u: Complex64, zs: &[Complex64]) -> f64 {
    let x1 = spec.separated[0].x();
    let lhs = d.b_action(spec, u, zs);
    let rhs = spec.p * (u - x1) * d.psi;
    if (u - x1).norm() < 1e-12 {
        lhs.norm()
    } else {
        (lhs - rhs).norm() / rhs.norm()
    }
}

/// Position-space `Ψ^{(2)}_{p,x}(z_1, z_2)`.
pub fn psi_position_eval(spec: &EigenfunctionSpec, zs: &[Complex64], quad: &QuadratureSpec) -> Result<IntegralEstimate, SovError> {
    check_n2(spec, zs)?;
    let g = spec.gamma()?;
    let x = &spec.separated;
    let a = g.at(1).minus_ix(&x[0]).exponent()?;
    let b = g.at(2).plus_ix(&x[0]).exponent()?;
    let norm = PI.powi(-2) * spec.p.norm() * varpi_prefactor(x, &g)?;
    let mut e = plane_wave_integral(spec.p, &[WaveFactor::new(a, zs[0]), WaveFactor::new(b, zs[1])], quad)?;
    e.value *= norm;
    e.err *= norm.norm();
    Ok(e)
}

/// Product of the propagators of a tree-level momentum form (no loop vertex), prefactor excluded.
pub(crate) fn lines_value(form: &MomentumForm, momenta: &[Complex64]) -> Result<Complex64, SovError> {
    let pts = dual_points(momenta);
    let mut v = c64(1.0, 0.0);
    for l in &form.lines {
        v *= eval_propagator(&l.alpha, pts[l.to] - pts[l.from])?;
    }
    Ok(v)
}
