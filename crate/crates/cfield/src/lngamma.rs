//! Complex log-gamma: Stirling series after an upward shift to `|x| ≥ 17`,
//! reflection for `Re x < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

const LN_PI: f64 = 1.1447298858494002;
const STIRLING_MIN: f64 = 17.0;
// B_{2k} / (2k (2k - 1))
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

/// `ln Γ(x)` modulo `2πi`. Undefined at the poles.
pub fn ln_gamma(x: Complex64) -> Complex64 {
    if x.re < 0.5 {
        Complex64::new(LN_PI, 0.0) - ln_sin_pi(x) - ln_gamma_right(Complex64::new(1.0, 0.0) - x)
    } else {
        ln_gamma_right(x)
    }
}

fn ln_gamma_right(x: Complex64) -> Complex64 {
    if x.norm() < STIRLING_MIN {
        let n = (STIRLING_MIN - x.re).ceil().max(0.0) as usize;
        let mut prod = Complex64::new(1.0, 0.0);
        for k in 0..n {
            prod *= x + k as f64;
        }
        return ln_gamma_stirling(x + n as f64) - prod.ln();
    }
    ln_gamma_stirling(x)
}

fn ln_gamma_stirling(x: Complex64) -> Complex64 {
    let inv = x.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// `ln sin(πx)` modulo `2πi`, stable for large `|Im x|`.
pub fn ln_sin_pi(x: Complex64) -> Complex64 {
    let k = x.re.round();
    let f = x - k;
    let parity = if (k as i64).rem_euclid(2) == 1 {
        Complex64::new(0.0, PI)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let i = Complex64::new(0.0, 1.0);
    let l = if f.im > 1.0 {
        // sin(πf) = e^{-iπf} (e^{2iπf} - 1) / (2i)
        -i * PI * f + (Complex64::new(1.0, 0.0) - (2.0 * i * PI * f).exp()).ln()
            - Complex64::new(2.0f64.ln(), PI / 2.0)
            + Complex64::new(0.0, PI)
    } else if f.im < -1.0 {
        i * PI * f + (Complex64::new(1.0, 0.0) - (-2.0 * i * PI * f).exp()).ln()
            - Complex64::new(2.0f64.ln(), PI / 2.0)
    } else {
        (f * PI).sin().ln()
    };
    l + parity
}
