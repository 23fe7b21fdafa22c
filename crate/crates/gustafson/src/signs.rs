//! Integer bookkeeping of the `(−1)^{[i(a − b)]}` factors relating `J_ω` to
//! the second identity. For `a = in_a/2 + ν_a`, `[i(a − b)] = −(n_a − n_b)`.

use crate::{GustafsonError, SpectralPoint};

/// `[i(a − b)]`; the discrete parts must have equal parity.
pub fn pair_sign_exponent(a: &SpectralPoint, b: &SpectralPoint) -> Result<i64, GustafsonError> {
    let d = a.n2 as i64 - b.n2 as i64;
    if d.rem_euclid(2) != 0 {
        return Err(GustafsonError::ParityMismatch {
            name: "n_a − n_b".into(),
            bracket: d as f64 / 2.0,
            sigma: 0,
        });
    }
    Ok(-d / 2)
}

/// `Σ_{k<j} [i(y_k − y_j)]`, the sign relating `Π_{k≠j} 1/Γ[i(y_k − y_j)]` to `μ(y)`.
pub fn mu_sign_exponent(ys: &[SpectralPoint]) -> Result<i64, GustafsonError> {
    let mut s = 0;
    for k in 0..ys.len() {
        for j in k + 1..ys.len() {
            s += pair_sign_exponent(&ys[k], &ys[j])?;
        }
    }
    Ok(s)
}

/// `Σ_j Σ_k [i(y_j − x_k)]`, from swapping `Γ[i(x̄_k − ȳ_j)]` to `Γ[i(x_k − y_j)]`.
pub fn cross_sign_exponent(ys: &[SpectralPoint], xs: &[SpectralPoint]) -> Result<i64, GustafsonError> {
    let mut s = 0;
    for y in ys {
        for x in xs {
            s += pair_sign_exponent(y, x)?;
        }
    }
    Ok(s)
}

/// Whether `(−1)^{Σ_{k<j}[i(y_k−y_j)]} (−1)^{Σ_{j,k}[i(y_j−x_k)]} = (−1)^{Σ_{k<j}[i(x_k−x_j)]}`.
pub fn rearrangement_holds(ys: &[SpectralPoint], xs: &[SpectralPoint]) -> Result<bool, GustafsonError> {
    let lhs = mu_sign_exponent(ys)? + cross_sign_exponent(ys, xs)?;
    let rhs = mu_sign_exponent(xs)?;
    Ok((lhs - rhs).rem_euclid(2) == 0)
}
