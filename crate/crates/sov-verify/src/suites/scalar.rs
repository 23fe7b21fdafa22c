use std::collections::HashMap;
use std::f64::consts::PI;

use cfield::c64;
use diagrams::{enumerate_reductions, reduce};
use num_complex::Complex64;
use plane::QuadratureSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sov::epsilon::{default_test_functions, epsilon_study, EPSILON_SEQUENCE};
use sov::{
    bb_sign, build_gamma, measure_mu, scalar_ab_closed, scalar_ab_fourier_n1, scalar_bb_closed, scalar_bb_diagram, scalar_bb_forms,
    scalar_bb_quadrature, scalar_mixed_closed, scalar_mixed_quadrature_n1, sov_constants, ChainSpec, GammaVector, Impurity, Kind,
    SeparatedPoint, Spin,
};

use super::{growth, real, worst, Outcome, Row, Task};
use crate::report::Table;
use crate::VerifyError;

pub(crate) const MEASURE_DRAWS: usize = 1000;

const BB: &str = "B-B scalar product";

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub(crate) fn random_chain(rng: &mut ChaCha8Rng, n: usize) -> ChainSpec {
    ChainSpec {
        n,
        spins: (0..n)
            .map(|_| Spin {
                n2: 2 * rng.gen_range(-1..=1),
                rho: rng.gen_range(-0.8..0.8),
            })
            .collect(),
        impurities: (0..n)
            .map(|_| Impurity {
                re: rng.gen_range(-0.5..0.5),
                im: 0.0,
            })
            .collect(),
        epsilon: 0.0,
    }
}

fn epsilon_chain() -> ChainSpec {
    ChainSpec {
        n: 2,
        spins: vec![Spin { n2: 0, rho: 0.15 }, Spin { n2: 2, rho: -0.25 }],
        impurities: vec![Impurity { re: 0.2, im: 0.0 }, Impurity { re: -0.1, im: 0.0 }],
        epsilon: 0.0,
    }
}

fn points(rng: &mut ChaCha8Rng, k: usize, im: f64) -> Vec<SeparatedPoint> {
    (0..k)
        .map(|_| SeparatedPoint::new(2 * rng.gen_range(-1..=1), c64(rng.gen_range(-1.0..1.0), im)))
        .collect()
}

fn momentum(rng: &mut ChaCha8Rng) -> Complex64 {
    c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))
}

fn gamma_b(rng: &mut ChaCha8Rng, n: usize, fixed: Option<&ChainSpec>) -> Result<GammaVector, VerifyError> {
    match fixed {
        Some(c) if c.n == n => Ok(build_gamma(c, Kind::B)?),
        _ => Ok(build_gamma(&random_chain(rng, n), Kind::B)?),
    }
}

/// Reduction of the B-B diagram against the closed form, and every other rule order against it.
fn reduction(n: usize, k: usize, g: GammaVector, x: Vec<SeparatedPoint>, y: Vec<SeparatedPoint>, eps: (f64, f64)) -> Task {
    let rows = vec![
        Row::new(format!("reduce.bb_n{n}.{k}.closed"), BB, 1e-9),
        Row::new(format!("reduce.bb_n{n}.{k}.confluence"), BB, 1e-9),
    ];
    Task::new(rows, move || {
        let d = scalar_bb_diagram(&x, &y, &g, eps.0, eps.1).map_err(s)?;
        let r = reduce(&d).map_err(s)?;
        let closed = scalar_bb_closed(&x, &y, &g, eps.0, eps.1).map_err(s)?;
        if !r.factor.approx_eq(&closed, 1e-9) {
            return Err(format!("reduced form {:?} is not the canonical product {:?}", r.factor, closed));
        }
        let b = HashMap::new();
        let v = r.eval(&b).map_err(s)?;
        let want = closed.eval_constant().map_err(s)?;
        let all = enumerate_reductions(&d, 3, 50).map_err(s)?;
        if let Some(i) = all.iter().position(|o| !o.same_as(&r, 1e-9)) {
            return Err(format!("rule order {i} gives a different canonical form"));
        }
        let mut alt = Vec::new();
        for o in &all {
            alt.push((o.eval(&b).map_err(s)?, v));
        }
        let (l, rr) = worst(alt);
        Ok(Outcome {
            values: vec![(v, want), (l, rr)],
            evals: all.len() as u64,
            tables: Vec::new(),
        })
    })
}

pub(crate) fn tasks(rng: &mut ChaCha8Rng, chain: Option<&ChainSpec>) -> Result<Vec<Task>, VerifyError> {
    let mut out = Vec::new();

    for k in 0..5 {
        let g = gamma_b(rng, 2, chain)?;
        out.push(reduction(2, k, g, points(rng, 1, 0.0), points(rng, 1, 0.0), (0.13, 0.07)));
    }
    for k in 0..3 {
        let g = gamma_b(rng, 3, None)?;
        let (x, y) = (points(rng, 2, 0.0), points(rng, 2, 0.0));
        out.push(Task::single(
            Row::new(format!("reduce.bb_n3.{k}.sign"), "sign factor C_N at odd N", 1e-12),
            {
                let g = g.clone();
                move || Ok(Outcome::one(real(bb_sign(&g).map_err(s)? as f64), real(1.0), 1))
            },
        ));
        out.push(reduction(3, k, g, x, y, (0.11, 0.05)));
    }
    for k in 0..3 {
        let g = gamma_b(rng, 2, chain)?;
        let (x, y) = (points(rng, 1, 0.1), points(rng, 1, 0.1));
        out.push(Task::single(Row::new(format!("reduce.bb_n2.{k}.quadrature"), BB, 1e-3), move || {
            let quad = QuadratureSpec::default().with_tol(1e-9, 1e-5);
            let closed = scalar_bb_closed(&x, &y, &g, 0.3, 0.3).map_err(s)?.eval_constant().map_err(s)?;
            let num = scalar_bb_quadrature(&x, &y, &g, 0.3, 0.3, c64(0.8, -0.5), &quad).map_err(s)?;
            Ok(Outcome::one(num.value, closed, num.evals as u64))
        }));
    }

    for k in 0..20 {
        let n = rng.gen_range(2..=4);
        let g = gamma_b(rng, n, chain)?;
        let (x, y) = (points(rng, n - 1, 0.1), points(rng, n - 1, 0.1));
        out.push(Task::single(Row::new(format!("scalar.bb_forms.{k:02}"), BB, 1e-10), move || {
            let (a, b) = scalar_bb_forms(&x, &y, &g, 0.2, 0.1).map_err(s)?;
            Ok(Outcome::one(a.eval_constant().map_err(s)?, b.eval_constant().map_err(s)?, 2))
        }));
    }
    for k in 0..5 {
        let g = build_gamma(&random_chain(rng, 1), Kind::A)?;
        let im = rng.gen_range(-0.2..0.2);
        let x = points(rng, 1, im);
        let p = momentum(rng);
        out.push(Task::single(Row::new(format!("scalar.ab_n1.{k}"), "A-B scalar product", 1e-5), move || {
            let quad = QuadratureSpec::default().with_tol(1e-10, 1e-7);
            let closed = scalar_ab_closed(&x, &[], &g, p).map_err(s)?.value().map_err(s)?;
            let num = scalar_ab_fourier_n1(&x[0], &g, p, &quad).map_err(s)?;
            Ok(Outcome::one(num, closed, 1))
        }));
    }
    for k in 0..5 {
        let g = gamma_b(rng, 2, chain)?;
        let im = rng.gen_range(-0.2..0.2);
        let x = points(rng, 1, im);
        let (q1, q2) = (momentum(rng), momentum(rng));
        out.push(Task::single(Row::new(format!("scalar.mixed_n1.{k}"), "mixed scalar product", 1e-3), move || {
            let quad = QuadratureSpec::default().with_tol(1e-10, 1e-7);
            let closed = scalar_mixed_closed(&[], &x, &g, q1, q2).map_err(s)?.value().map_err(s)?;
            let num = scalar_mixed_quadrature_n1(&x[0], &g, q1, q2, &quad).map_err(s)?;
            Ok(Outcome::one(num, closed, 1))
        }));
    }

    out.extend(measure_tasks(rng));

    let g = build_gamma(chain.unwrap_or(&epsilon_chain()), Kind::B)?;
    out.push(Task::single(Row::fixed("epsilon.cauchy_growth", "regularised pairing as ε → 0", 1e-15), move || {
        let st = epsilon_study(&g, &default_test_functions(), &EPSILON_SEQUENCE, 1e-6).map_err(s)?;
        let diffs = std::iter::once(0.0).chain(st.cauchy.iter().copied());
        let rows = st.eps.iter().zip(&st.values).zip(diffs).map(|((e, v), d)| vec![*e, v.re, v.im, d]).collect();
        let table = Table {
            name: "epsilon.pairing".into(),
            paper_anchor: "regularised pairing as ε → 0".into(),
            columns: vec!["eps".into(), "re Q".into(), "im Q".into(), "|ΔQ|".into()],
            rows,
            monotone: st.is_monotone(),
        };
        let g = growth(&st.cauchy, 0.0);
        Ok(Outcome {
            values: vec![(real(g), real(0.0))],
            evals: st.evals as u64,
            tables: vec![table],
        })
    }));
    Ok(out)
}

fn measure_tasks(rng: &mut ChaCha8Rng) -> Vec<Task> {
    let sets: Vec<Vec<SeparatedPoint>> = (0..MEASURE_DRAWS)
        .map(|_| {
            let len = rng.gen_range(2..=4);
            (0..len)
                .map(|_| SeparatedPoint::real(rng.gen_range(-4..=4), rng.gen_range(-2.0..2.0)))
                .collect()
        })
        .collect();
    let perms: Vec<usize> = (0..MEASURE_DRAWS).map(|_| rng.gen_range(0..4)).collect();
    let anchor = "SoV measure μ";
    let mut out = Vec::new();
    let data = sets.clone();
    out.push(Task::single(Row::fixed("measure.positivity", anchor, 0.5), move || {
        let bad = data.iter().filter(|x| !(measure_mu(x) > 0.0)).count();
        Ok(Outcome::one(real(bad as f64), real(0.0), data.len() as u64))
    }));
    let data = sets.clone();
    out.push(Task::single(Row::new("measure.permutation", anchor, 1e-12), move || {
        let pairs = data.iter().zip(&perms).map(|(x, &k)| {
            let mut y = x.clone();
            let k = k % y.len();
            y.swap(0, k);
            y.reverse();
            (real(measure_mu(&y)), real(measure_mu(x)))
        });
        let (l, r) = worst(pairs);
        Ok(Outcome::one(l, r, data.len() as u64))
    }));
    let data = sets;
    out.push(Task::single(Row::fixed("measure.coincidence", anchor, f64::MIN_POSITIVE), move || {
        let m = data
            .iter()
            .map(|x| {
                let mut y = x.clone();
                y.push(x[x.len() - 1]);
                measure_mu(&y).abs()
            })
            .fold(0.0, f64::max);
        Ok(Outcome::one(real(m), real(0.0), data.len() as u64))
    }));
    out.push(Task::single(Row::new("constants.c1_B", "SoV normalisation c_N", 1e-15), || {
        Ok(Outcome::one(real(sov_constants(1, Kind::B)), real(1.0 / (2.0 * PI * PI)), 1))
    }));
    out.push(Task::single(Row::new("constants.c1_A", "SoV normalisation c_N", 1e-15), || {
        Ok(Outcome::one(real(sov_constants(1, Kind::A)), real(1.0 / (2.0 * PI)), 1))
    }));
    out
}
