use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::CfieldError;

/// Tolerance on `a - abar` being an integer.
pub const INTEGER_DIFF_TOL: f64 = 1e-9;

/// A pair `(a, abar)` of exponents whose difference is an integer.
///
/// Stored as `m = a - abar` and `w = (a + abar) / 2`, so that
/// `a = w + m/2` and `abar = w - m/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldExponent {
    m: i32,
    w: Complex64,
}

impl FieldExponent {
    pub fn new(a: Complex64, abar: Complex64) -> Result<Self, CfieldError> {
        let d = a - abar;
        let m = d.re.round();
        if (d - Complex64::new(m, 0.0)).norm() > INTEGER_DIFF_TOL || !m.is_finite() {
            return Err(CfieldError::NonIntegerDifference { a, abar });
        }
        Ok(Self {
            m: m as i32,
            w: (a + abar) * 0.5,
        })
    }

    pub fn from_mw(m: i32, w: Complex64) -> Self {
        Self { m, w }
    }

    /// Exponent with `a = abar = c`.
    pub fn scalar(c: Complex64) -> Self {
        Self { m: 0, w: c }
    }

    pub fn zero() -> Self {
        Self::scalar(Complex64::new(0.0, 0.0))
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn a(&self) -> Complex64 {
        self.w + 0.5 * self.m as f64
    }

    pub fn abar(&self) -> Complex64 {
        self.w - 0.5 * self.m as f64
    }

    /// `(1 - a, 1 - abar)`.
    pub fn reflect(&self) -> Self {
        Self {
            m: -self.m,
            w: Complex64::new(1.0, 0.0) - self.w,
        }
    }

    /// `(abar, a)`.
    pub fn swap(&self) -> Self {
        Self {
            m: -self.m,
            w: self.w,
        }
    }

    /// `(conj a, conj abar)`.
    pub fn conj(&self) -> Self {
        Self {
            m: self.m,
            w: self.w.conj(),
        }
    }

    /// `(conj abar, conj a)`: the index of the complex conjugate propagator.
    pub fn conj_swap(&self) -> Self {
        Self {
            m: -self.m,
            w: self.w.conj(),
        }
    }

    /// Adds `c` to both components.
    pub fn shift(&self, c: Complex64) -> Self {
        Self {
            m: self.m,
            w: self.w + c,
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.m == 0 && self.w.norm() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m && (self.w - other.w).norm() <= tol
    }
}

impl Add for FieldExponent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            m: self.m + o.m,
            w: self.w + o.w,
        }
    }
}

impl Sub for FieldExponent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            m: self.m - o.m,
            w: self.w - o.w,
        }
    }
}

impl Neg for FieldExponent {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            m: -self.m,
            w: -self.w,
        }
    }
}

impl fmt::Display for FieldExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[m={}, w={}{:+}i]", self.m, self.w.re, self.w.im)
    }
}

pub fn make_exponent(a: Complex64, abar: Complex64) -> Result<FieldExponent, CfieldError> {
    FieldExponent::new(a, abar)
}

pub fn exponent_reflect(u: &FieldExponent) -> FieldExponent {
    u.reflect()
}

/// `(-1)^m` as `+1` or `-1`.
pub fn sign_factor(u: &FieldExponent) -> i32 {
    if u.m().rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
