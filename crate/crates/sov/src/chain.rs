//! Chain parameters, separated variables and γ-vectors.

use std::ops::{Add, Neg, Sub};

use cfield::{c64, FieldExponent};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::SovError;

const LABEL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spin {
    /// Twice the spin label `n_k`.
    pub n2: i32,
    pub rho: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Impurity {
    pub re: f64,
    pub im: f64,
}

impl Impurity {
    pub fn value(&self) -> Complex64 {
        c64(self.re, self.im)
    }
}

/// Spins, impurities and regulator of an inhomogeneous chain of length `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub spins: Vec<Spin>,
    pub impurities: Vec<Impurity>,
    #[serde(default)]
    pub epsilon: f64,
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= LABEL_TOL
}

impl ChainSpec {
    /// Homogeneous chain: every site has the same spin, no impurities.
    pub fn homogeneous(n: usize, n2: i32, rho: f64) -> Self {
        Self {
            n,
            spins: vec![Spin { n2, rho }; n],
            impurities: vec![Impurity { re: 0.0, im: 0.0 }; n],
            epsilon: 0.0,
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn validate(&self) -> Result<(), SovError> {
        if self.n == 0 {
            return Err(SovError::InvalidChain("N must be at least 1".into()));
        }
        if self.spins.len() != self.n || self.impurities.len() != self.n {
            return Err(SovError::InvalidChain(format!(
                "N = {} but {} spins and {} impurities",
                self.n,
                self.spins.len(),
                self.impurities.len()
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(SovError::InvalidChain(format!("epsilon must be finite and >= 0, got {}", self.epsilon)));
        }
        for (k, (s, xi)) in self.spins.iter().zip(&self.impurities).enumerate() {
            if !s.rho.is_finite() || !xi.re.is_finite() || !xi.im.is_finite() {
                return Err(SovError::InvalidChain(format!("site {} has a non-finite parameter", k + 1)));
            }
            // i(ξ - ξ̄) = -2 Im ξ must be a half-integer.
            if !is_integer(4.0 * xi.im) {
                return Err(SovError::InvalidChain(format!(
                    "impurity {} has Im ξ = {}, 2 Im ξ must be a half-integer",
                    k + 1,
                    xi.im
                )));
            }
        }
        Ok(())
    }

    /// `s_k = (1 + n_k)/2 + iρ_k`, `s̄_k = (1 - n_k)/2 + iρ_k` for site `k` (0-based).
    pub fn spin_pair(&self, k: usize) -> IndexPair {
        let s = self.spins[k];
        let n = s.n2 as f64 / 2.0;
        IndexPair::new(c64((1.0 + n) / 2.0, s.rho), c64((1.0 - n) / 2.0, s.rho))
    }

    /// `(ξ_k, ξ̄_k)` with `ξ̄_k = conj ξ_k`.
    pub fn impurity_pair(&self, k: usize) -> IndexPair {
        let xi = self.impurities[k].value();
        IndexPair::new(xi, xi.conj())
    }
}

/// A separated variable `x = i n/2 + ν`, `x̄ = -i n/2 + ν` with `n = n2/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparatedPoint {
    pub n2: i32,
    pub nu: Complex64,
}

impl SeparatedPoint {
    pub fn new(n2: i32, nu: Complex64) -> Self {
        Self { n2, nu }
    }

    pub fn real(n2: i32, nu: f64) -> Self {
        Self::new(n2, c64(nu, 0.0))
    }

    pub fn n(&self) -> f64 {
        self.n2 as f64 / 2.0
    }

    pub fn x(&self) -> Complex64 {
        c64(0.0, self.n() / 2.0) + self.nu
    }

    pub fn xbar(&self) -> Complex64 {
        c64(0.0, -self.n() / 2.0) + self.nu
    }

    /// `(ix, ix̄)`.
    pub fn i_pair(&self) -> IndexPair {
        let i = c64(0.0, 1.0);
        IndexPair::new(i * self.x(), i * self.xbar())
    }

    /// Shifts ν by `i·eta`.
    pub fn lifted(&self, eta: f64) -> Self {
        Self::new(self.n2, self.nu + c64(0.0, eta))
    }

    pub fn validate(&self) -> Result<(), SovError> {
        if !(self.nu.im.abs() < 0.5) || !self.nu.re.is_finite() {
            return Err(SovError::InvalidSpec(format!("separated point needs |Im ν| < 1/2, got ν = {}", self.nu)));
        }
        Ok(())
    }
}

/// A pair `(a, ā)` whose difference need not be an integer.
///
/// γ-entries carry half-integer differences in general; only the shifted
/// combinations `γ ± ix` are exponents of propagators and Γ-factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexPair {
    pub a: Complex64,
    pub abar: Complex64,
}

impl IndexPair {
    pub fn new(a: Complex64, abar: Complex64) -> Self {
        Self { a, abar }
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::new(c, c)
    }

    pub fn from_exponent(u: &FieldExponent) -> Self {
        Self::new(u.a(), u.abar())
    }

    /// `[a] = a - ā`.
    pub fn bracket(&self) -> Complex64 {
        self.a - self.abar
    }

    /// `(1 - a, 1 - ā)`.
    pub fn reflect(&self) -> Self {
        let one = c64(1.0, 0.0);
        Self::new(one - self.a, one - self.abar)
    }

    /// The k-fold reflection `a^{(k)}`.
    pub fn reflect_n(&self, k: usize) -> Self {
        if k % 2 == 0 {
            *self
        } else {
            self.reflect()
        }
    }

    pub fn swap(&self) -> Self {
        Self::new(self.abar, self.a)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.conj(), self.abar.conj())
    }

    /// Index of the conjugate propagator, `(ā*, a*)`.
    pub fn conj_swap(&self) -> Self {
        Self::new(self.abar.conj(), self.a.conj())
    }

    pub fn shift(&self, c: Complex64) -> Self {
        Self::new(self.a + c, self.abar + c)
    }

    pub fn minus_ix(&self, x: &SeparatedPoint) -> Self {
        *self - x.i_pair()
    }

    pub fn plus_ix(&self, x: &SeparatedPoint) -> Self {
        *self + x.i_pair()
    }

    pub fn exponent(&self) -> Result<FieldExponent, SovError> {
        FieldExponent::new(self.a, self.abar).map_err(|_| SovError::NonIntegerIndex {
            a: self.a,
            abar: self.abar,
        })
    }
}

impl Add for IndexPair {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.abar + o.abar)
    }
}

impl Sub for IndexPair {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.abar - o.abar)
    }
}

impl Neg for IndexPair {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.abar)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    B,
    A,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaVector {
    pub entries: Vec<IndexPair>,
}

impl GammaVector {
    pub fn new(entries: Vec<IndexPair>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based access, matching the index conventions of the formulas.
    pub fn at(&self, k: usize) -> IndexPair {
        self.entries[k - 1]
    }

    /// Largest deviation from the unitarity line `γ + conj(γ̄) = 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|g| (g.a + g.abar.conj() - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Applies [`rho_map`] `k` times.
    pub fn rho_pow(&self, k: usize) -> Result<Self, SovError> {
        let mut g = self.clone();
        for _ in 0..k {
            g = rho_map(&g)?;
        }
        Ok(g)
    }
}

/// `(s_1-iξ_1, s_2+iξ_2, s_2-iξ_2, …, s_N+iξ_N)` for B; A appends `s_N-iξ_N`.
/// A positive regulator replaces `ξ_N` by `ξ_N - iε` (on both components).
pub fn build_gamma(chain: &ChainSpec, kind: Kind) -> Result<GammaVector, SovError> {
    chain.validate()?;
    let n = chain.n;
    let i = c64(0.0, 1.0);
    let eps = IndexPair::scalar(c64(0.0, -chain.epsilon));
    let xi = |k: usize| {
        let x = chain.impurity_pair(k);
        if k + 1 == n {
            x + eps
        } else {
            x
        }
    };
    let plus = |k: usize| {
        let x = xi(k);
        chain.spin_pair(k) + IndexPair::new(i * x.a, i * x.abar)
    };
    let minus = |k: usize| {
        let x = xi(k);
        chain.spin_pair(k) - IndexPair::new(i * x.a, i * x.abar)
    };
    let mut entries = Vec::with_capacity(2 * n);
    if n >= 2 || kind == Kind::A {
        entries.push(minus(0));
    }
    for k in 1..n {
        entries.push(plus(k));
        if k + 1 < n {
            entries.push(minus(k));
        }
    }
    if kind == Kind::A && n >= 2 {
        entries.push(minus(n - 1));
    }
    Ok(GammaVector::new(entries))
}

/// Drops the first and last entries and reflects the rest.
pub fn rho_map(g: &GammaVector) -> Result<GammaVector, SovError> {
    if g.len() < 3 {
        return Err(SovError::TooShort(g.len()));
    }
    Ok(GammaVector::new(g.entries[1..g.len() - 1].iter().map(|e| e.reflect()).collect()))
}

/// Kind, chain, momentum and separated variables of an eigenfunction.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenfunctionSpec {
    pub kind: Kind,
    pub chain: ChainSpec,
    pub p: Complex64,
    pub separated: Vec<SeparatedPoint>,
}

impl EigenfunctionSpec {
    pub fn b(chain: ChainSpec, p: Complex64, separated: Vec<SeparatedPoint>) -> Self {
        Self {
            kind: Kind::B,
            chain,
            p,
            separated,
        }
    }

    pub fn a(chain: ChainSpec, separated: Vec<SeparatedPoint>) -> Self {
        Self {
            kind: Kind::A,
            chain,
            p: c64(0.0, 0.0),
            separated,
        }
    }

    pub fn gamma(&self) -> Result<GammaVector, SovError> {
        build_gamma(&self.chain, self.kind)
    }

    pub fn validate(&self) -> Result<(), SovError> {
        self.chain.validate()?;
        let want = match self.kind {
            Kind::B => self.chain.n - 1,
            Kind::A => self.chain.n,
        };
        if self.separated.len() != want {
            return Err(SovError::InvalidSpec(format!(
                "{:?}-kind eigenfunction of a chain of length {} needs {} separated variables, got {}",
                self.kind,
                self.chain.n,
                want,
                self.separated.len()
            )));
        }
        for x in &self.separated {
            x.validate()?;
        }
        if let Some(first) = self.separated.first() {
            if self.separated.iter().any(|x| (x.n2 - first.n2).rem_euclid(2) != 0) {
                return Err(SovError::InvalidSpec("separated labels mix integer and half-integer n".into()));
            }
            let g = self.gamma()?;
            for e in &g.entries {
                e.minus_ix(first).exponent()?;
            }
        }
        Ok(())
    }
}
