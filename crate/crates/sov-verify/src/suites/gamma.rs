use cfield::{afactor, c64, cgamma, exponent_reflect, sign_factor, FieldExponent};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{real, worst, Outcome, Row, Task};

pub(crate) const DRAWS: usize = 1000;
const TOL: f64 = 1e-12;

fn draw(rng: &mut ChaCha8Rng) -> FieldExponent {
    loop {
        let re: f64 = rng.gen_range(-6.0..6.0);
        if (re - re.round()).abs() > 1e-3 {
            return FieldExponent::from_mw(rng.gen_range(-4..=4), c64(re, rng.gen_range(-40.0..40.0)));
        }
    }
}

fn property(name: &str, anchor: &'static str, us: &[FieldExponent], f: fn(&FieldExponent) -> (Complex64, Complex64)) -> Task {
    let us = us.to_vec();
    Task::single(Row::new(format!("gamma.{name}"), anchor, TOL), move || {
        let (l, r) = worst(us.iter().map(f));
        Ok(Outcome::one(l, r, us.len() as u64))
    })
}

pub(crate) fn tasks(rng: &mut ChaCha8Rng) -> Vec<Task> {
    let us: Vec<FieldExponent> = (0..DRAWS).map(|_| draw(rng)).collect();
    vec![
        property("recurrence", "Γ[u+1] = −uū·Γ[u]", &us, |u| {
            (cgamma(&u.shift(c64(1.0, 0.0))).value, -u.a() * u.abar() * cgamma(u).value)
        }),
        property("reflection", "Γ[u]Γ[1−u] = (−1)^[u]", &us, |u| {
            (cgamma(u).value * cgamma(&exponent_reflect(u)).value, real(sign_factor(u) as f64))
        }),
        property("swap", "Γ[ū,u] = (−1)^[u] Γ[u,ū]", &us, |u| {
            (cgamma(&u.swap()).value, cgamma(u).value * sign_factor(u) as f64)
        }),
        property("conjugation", "Γ[u*] = Γ[u]*", &us, |u| (cgamma(&u.conj()).value, cgamma(u).value.conj())),
        property("a-factor", "a(u)Γ[u] = 1", &us, |u| (afactor(u).value * cgamma(u).value, real(1.0))),
    ]
}
