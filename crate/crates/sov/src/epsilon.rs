//! The regulated B–B pairing at N = 2 smeared against test functions, as the
//! regulator is removed along a sequence.

use cfield::c64;
use num_complex::Complex64;
use plane::de::{de_quad, DeMap};

use crate::chain::{GammaVector, SeparatedPoint};
use crate::scalar::scalar_bb_forms;
use crate::SovError;

/// Regulator sequence used by the acceptance suite.
pub const EPSILON_SEQUENCE: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

const MAX_LEVEL: u32 = 12;

/// `weight · exp(1 − 1/(1 − t²))`, `t = (ν − center)/radius`, in the sector `n = n2/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub n2: i32,
    pub center: f64,
    pub radius: f64,
    pub weight: f64,
}

impl TestFunction {
    pub fn eval(&self, nu: f64) -> f64 {
        let t = (nu - self.center) / self.radius;
        if t.abs() >= 1.0 {
            0.0
        } else {
            self.weight * (1.0 - 1.0 / (1.0 - t * t)).exp()
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }
}

/// Test functions in the sectors `n = 0` and `n = 1`.
pub fn default_test_functions() -> Vec<TestFunction> {
    vec![
        TestFunction {
            n2: 0,
            center: 0.1,
            radius: 0.8,
            weight: 1.0,
        },
        TestFunction {
            n2: 2,
            center: -0.2,
            radius: 0.6,
            weight: 0.7,
        },
    ]
}

#[derive(Clone, Debug)]
pub struct EpsilonStudy {
    pub eps: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `|Q(ε_{k+1}) − Q(ε_k)|`.
    pub cauchy: Vec<f64>,
    pub evals: usize,
}

impl EpsilonStudy {
    pub fn is_monotone(&self) -> bool {
        self.cauchy.windows(2).all(|w| w[1] < w[0])
    }
}

/// `Q(ε) = Σ_{ij} ∫∫ φ_i(ν) φ_j(μ) I^{ε,ε}(x_i(ν + iη), y_j(μ + iη)) dν dμ`, `η = ε/4`,
/// for the N = 2 B-kind γ `g`.
pub fn smeared_pairing(g: &GammaVector, tests: &[TestFunction], eps: f64, tol: f64) -> Result<(Complex64, usize), SovError> {
    if g.len() != 2 {
        return Err(SovError::Unsupported("the ε study is implemented for N = 2".into()));
    }
    if !(eps > 0.0) {
        return Err(SovError::InvalidSpec("ε must be positive".into()));
    }
    let eta = eps / 4.0;
    // Surface the first failure; the quadrature callbacks cannot return errors.
    let probe = |a: &TestFunction, b: &TestFunction| -> Result<(), SovError> {
        let x = SeparatedPoint::new(a.n2, c64(a.center, eta));
        let y = SeparatedPoint::new(b.n2, c64(b.center + 0.01, eta));
        scalar_bb_forms(&[x], &[y], g, eps, eps)?.0.eval_constant().map_err(SovError::Diagram)?;
        Ok(())
    };
    let kernel = |a: &TestFunction, b: &TestFunction, nu: f64, mu: f64| -> Complex64 {
        let x = SeparatedPoint::new(a.n2, c64(nu, eta));
        let y = SeparatedPoint::new(b.n2, c64(mu, eta));
        match scalar_bb_forms(&[x], &[y], g, eps, eps).map(|f| f.0.eval_constant()) {
            Ok(Ok(v)) => v,
            _ => c64(f64::NAN, 0.0),
        }
    };
    let mut total = c64(0.0, 0.0);
    let mut evals = 0;
    for a in tests {
        for b in tests {
            probe(a, b)?;
            let (alo, ahi) = a.support();
            let (blo, bhi) = b.support();
            let inner = |nu: f64| -> Complex64 {
                let f = |mu: f64| kernel(a, b, nu, mu) * b.eval(mu);
                let mut s = c64(0.0, 0.0);
                if nu > blo && nu < bhi {
                    s += de_quad(f, DeMap::TanhSinh { a: blo, b: nu }, tol * 1e-2, tol * 1e-2, MAX_LEVEL).value;
                    s += de_quad(f, DeMap::TanhSinh { a: nu, b: bhi }, tol * 1e-2, tol * 1e-2, MAX_LEVEL).value;
                } else {
                    s += de_quad(f, DeMap::TanhSinh { a: blo, b: bhi }, tol * 1e-2, tol * 1e-2, MAX_LEVEL).value;
                }
                s * a.eval(nu)
            };
            let r = de_quad(inner, DeMap::TanhSinh { a: alo, b: ahi }, tol, tol, MAX_LEVEL);
            if !r.converged {
                return Err(SovError::Plane(plane::PlaneError::NotConverged(plane::IntegralEstimate {
                    value: r.value,
                    err: r.err,
                    evals: r.evals,
                    converged: false,
                })));
            }
            evals += r.evals;
            total += r.value;
        }
    }
    Ok((total, evals))
}

/// `Q(ε)` along `eps_list` and the successive differences.
pub fn epsilon_study(g: &GammaVector, tests: &[TestFunction], eps_list: &[f64], tol: f64) -> Result<EpsilonStudy, SovError> {
    let mut values = Vec::new();
    let mut evals = 0;
    for &e in eps_list {
        let (v, n) = smeared_pairing(g, tests, e, tol)?;
        values.push(v);
        evals += n;
    }
    let cauchy = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    Ok(EpsilonStudy {
        eps: eps_list.to_vec(),
        values,
        cauchy,
        evals,
    })
}
