use std::collections::HashMap;
use std::f64::consts::PI;

use cfield::{ln_cgamma, FieldExponent, LnGamma};
use num_complex::Complex64;

use crate::DiagramError;

/// Tolerance used when merging and comparing exponent pairs.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GammaFactor {
    pub u: FieldExponent,
    pub mult: i32,
}

/// `D_α(s)` for a momentum symbol `s`, or for `a-b` (difference of two bound labels).
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumPower {
    pub symbol: String,
    pub alpha: FieldExponent,
}

/// `π^k · i^q · sign · ∏ Γ[u]^mult · ∏ D_α(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormFactor {
    pub pi_power: i32,
    pub phase_quarter_turns: i32,
    pub sign: i32,
    pub gamma_factors: Vec<GammaFactor>,
    pub momentum_powers: Vec<MomentumPower>,
}

impl Default for ClosedFormFactor {
    fn default() -> Self {
        Self::one()
    }
}

fn parity_sign(m: i64) -> i32 {
    if m.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl ClosedFormFactor {
    pub fn one() -> Self {
        Self {
            pi_power: 0,
            phase_quarter_turns: 0,
            sign: 1,
            gamma_factors: Vec::new(),
            momentum_powers: Vec::new(),
        }
    }

    pub fn times_pi(mut self, k: i32) -> Self {
        self.pi_power += k;
        self
    }

    pub fn times_i(mut self, q: i32) -> Self {
        self.phase_quarter_turns += q;
        self
    }

    pub fn times_sign(mut self, s: i32) -> Self {
        self.sign *= s;
        self
    }

    /// Multiplies by `(-1)^m`.
    pub fn times_parity(self, m: i32) -> Self {
        self.times_sign(parity_sign(m as i64))
    }

    pub fn times_gamma(mut self, u: FieldExponent, mult: i32) -> Self {
        if mult != 0 {
            self.gamma_factors.push(GammaFactor { u, mult });
        }
        self
    }

    /// Multiplies by `a(u) = 1/Γ[u]`.
    pub fn times_a(self, u: FieldExponent) -> Self {
        self.times_gamma(u, -1)
    }

    pub fn times_momentum(mut self, symbol: &str, alpha: FieldExponent) -> Self {
        self.momentum_powers.push(MomentumPower {
            symbol: symbol.to_string(),
            alpha,
        });
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.pi_power += other.pi_power;
        out.phase_quarter_turns += other.phase_quarter_turns;
        out.sign *= other.sign;
        out.gamma_factors.extend(other.gamma_factors.iter().cloned());
        out.momentum_powers.extend(other.momentum_powers.iter().cloned());
        out
    }

    pub fn inverse(&self) -> Self {
        Self {
            pi_power: -self.pi_power,
            phase_quarter_turns: -self.phase_quarter_turns,
            sign: self.sign,
            gamma_factors: self
                .gamma_factors
                .iter()
                .map(|g| GammaFactor { u: g.u, mult: -g.mult })
                .collect(),
            momentum_powers: self
                .momentum_powers
                .iter()
                .map(|p| MomentumPower {
                    symbol: p.symbol.clone(),
                    alpha: -p.alpha,
                })
                .collect(),
        }
    }

    /// Complex conjugate, assuming real momentum bindings are conjugated consistently
    /// (`conj D_α(p) = D_{(ᾱ*, α*)}(p)`).
    pub fn conj(&self) -> Self {
        Self {
            pi_power: self.pi_power,
            phase_quarter_turns: -self.phase_quarter_turns,
            sign: self.sign,
            gamma_factors: self
                .gamma_factors
                .iter()
                .map(|g| GammaFactor { u: g.u.conj(), mult: g.mult })
                .collect(),
            momentum_powers: self
                .momentum_powers
                .iter()
                .map(|p| MomentumPower {
                    symbol: p.symbol.clone(),
                    alpha: p.alpha.conj_swap(),
                })
                .collect(),
        }
    }

    /// Canonical form: positive multiplicities only, `m ≥ 0`, reflection pairs
    /// cancelled, factors sorted by `(m, Re w, Im w)`, phase in `{0, 1}`.
    pub fn canonical(&self) -> Self {
        let mut sign = self.sign;
        let mut items: Vec<(FieldExponent, i32)> = Vec::new();
        for g in &self.gamma_factors {
            let (mut u, mut k) = (g.u, g.mult);
            if k < 0 {
                // Γ[u]^{-1} = (-1)^m Γ[1-u]
                sign *= parity_sign(u.m() as i64 * (-k) as i64);
                u = u.reflect();
                k = -k;
            }
            if u.m() < 0 {
                // Γ[u] = (-1)^m Γ[swap u]
                sign *= parity_sign(u.m() as i64 * k as i64);
                u = u.swap();
            }
            items.push((u, k));
        }
        // Γ[u] = 1 when w = 1/2 and m ≥ 0.
        items.retain(|(u, _)| (u.w() - Complex64::new(0.5, 0.0)).norm() > MERGE_TOL);
        sort_exponents(&mut items);
        let mut merged: Vec<(FieldExponent, i32)> = Vec::new();
        for (u, k) in items {
            if let Some(last) = merged.last_mut() {
                if last.0.approx_eq(&u, MERGE_TOL) {
                    last.1 += k;
                    continue;
                }
            }
            merged.push((u, k));
        }
        // Γ[(m, w)] Γ[(m, 1-w)] = 1
        let n = merged.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (ui, uj) = (merged[i].0, merged[j].0);
                if ui.m() == uj.m() && (ui.w() + uj.w() - Complex64::new(1.0, 0.0)).norm() <= MERGE_TOL {
                    let c = merged[i].1.min(merged[j].1);
                    merged[i].1 -= c;
                    merged[j].1 -= c;
                }
            }
        }
        let gamma_factors = merged
            .into_iter()
            .filter(|(_, k)| *k != 0)
            .map(|(u, mult)| GammaFactor { u, mult })
            .collect();

        let mut moms: Vec<MomentumPower> = Vec::new();
        for p in &self.momentum_powers {
            if let Some(q) = moms.iter_mut().find(|q| q.symbol == p.symbol) {
                q.alpha = q.alpha + p.alpha;
            } else {
                moms.push(p.clone());
            }
        }
        moms.retain(|p| !p.alpha.is_zero(MERGE_TOL));
        moms.sort_by(|a, b| a.symbol.cmp(&b.symbol));

        let mut q = self.phase_quarter_turns.rem_euclid(4);
        if q >= 2 {
            q -= 2;
            sign = -sign;
        }
        Self {
            pi_power: self.pi_power,
            phase_quarter_turns: q,
            sign,
            gamma_factors,
            momentum_powers: moms,
        }
    }

    /// Field-by-field comparison of canonical forms with exponent tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.pi_power == b.pi_power
            && a.phase_quarter_turns == b.phase_quarter_turns
            && a.sign == b.sign
            && a.gamma_factors.len() == b.gamma_factors.len()
            && a
                .gamma_factors
                .iter()
                .zip(&b.gamma_factors)
                .all(|(x, y)| x.mult == y.mult && x.u.approx_eq(&y.u, tol))
            && a.momentum_powers.len() == b.momentum_powers.len()
            && a
                .momentum_powers
                .iter()
                .zip(&b.momentum_powers)
                .all(|(x, y)| x.symbol == y.symbol && x.alpha.approx_eq(&y.alpha, tol))
    }

    /// Value of the Γ, π, phase and sign part (no momentum powers).
    pub fn eval_constant(&self) -> Result<Complex64, DiagramError> {
        let mut ln = Complex64::new(self.pi_power as f64 * PI.ln(), self.phase_quarter_turns as f64 * PI / 2.0);
        let mut order = 0i32;
        for g in &self.gamma_factors {
            match ln_cgamma(&g.u) {
                LnGamma::Finite(l) => ln += l * g.mult as f64,
                LnGamma::Pole => order += g.mult,
                LnGamma::Zero => order -= g.mult,
            }
        }
        if order > 0 {
            return Err(DiagramError::PoleEncountered);
        }
        if order < 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(ln.exp() * self.sign as f64)
    }

    /// Full value with momentum symbols taken from `bindings`.
    pub fn eval(&self, bindings: &HashMap<String, Complex64>) -> Result<Complex64, DiagramError> {
        let mut v = self.eval_constant()?;
        for p in &self.momentum_powers {
            let z = resolve_symbol(&p.symbol, bindings)?;
            v *= plane::eval_propagator(&p.alpha, z)?;
        }
        Ok(v)
    }
}

/// Looks up `s`, or `a-b` as the difference of two bindings.
pub fn resolve_symbol(s: &str, bindings: &HashMap<String, Complex64>) -> Result<Complex64, DiagramError> {
    if let Some(v) = bindings.get(s) {
        return Ok(*v);
    }
    if let Some((a, b)) = s.split_once('-') {
        if let (Some(x), Some(y)) = (bindings.get(a), bindings.get(b)) {
            return Ok(x - y);
        }
    }
    Err(DiagramError::Unbound(s.to_string()))
}

fn sort_exponents(items: &mut [(FieldExponent, i32)]) {
    items.sort_by(|(a, _), (b, _)| {
        a.m()
            .cmp(&b.m())
            .then(cmp_tol(a.w().re, b.w().re))
            .then(cmp_tol(a.w().im, b.w().im))
    });
}

fn cmp_tol(a: f64, b: f64) -> std::cmp::Ordering {
    if (a - b).abs() <= MERGE_TOL {
        std::cmp::Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
    }
}
