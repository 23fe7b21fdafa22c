use cfield::c64;
use gustafson::{convergence_table, j_omega_check, ConvergenceRow, MBPair, MBParams, MBProblem, MBSpec, SpectralPoint};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{growth, real, Outcome, Row, Task};
use crate::report::Table;

const FIRST: &str = "Gustafson integral, first kind";
const SECOND: &str = "Gustafson integral, second kind";
const J_OMEGA: &str = "J_ω through the second kind";

const N_LIST: [usize; 5] = [2, 4, 8, 16, 32];
const CUTOFFS: [f64; 5] = [2.0, 4.0, 8.0, 16.0, 32.0];
/// Relative errors below this are not required to decrease further.
const TABLE_FLOOR: f64 = 1e-9;

fn random_params(rng: &mut ChaCha8Rng, count: usize, sigma: u8, re: (f64, f64)) -> MBParams {
    let mut draw = || {
        let n2 = 2 * rng.gen_range(-1..=1) + sigma as i32;
        MBPair::new(n2, c64(rng.gen_range(re.0..re.1), rng.gen_range(-0.5..0.5)))
    };
    MBParams {
        z_list: (0..count).map(|_| draw()).collect(),
        w_list: (0..count).map(|_| draw()).collect(),
    }
}

fn j_omega_problem() -> MBProblem {
    MBProblem::JOmega {
        x: vec![SpectralPoint::new(2, c64(0.3, -0.03))],
        x_prime: vec![SpectralPoint::new(0, c64(-0.2, 0.04))],
        z: c64(0.5, 0.7),
        omega: c64(0.42, 0.0),
        zeta: Complex64::from_polar(0.7, 0.4),
    }
}

/// Shells needed for the lattice sum to fall below `1e-10` when it decays like `|ζ|^{±n}`.
fn shells_for(zeta: Complex64, base: usize) -> usize {
    let r = zeta.norm().min(1.0 / zeta.norm());
    if r >= 0.95 {
        return base;
    }
    ((1e-10f64.ln() / r.ln()).ceil() as usize + 8).clamp(base, 200)
}

fn identity(name: String, anchor: &'static str, tol: f64, problem: MBProblem, spec: MBSpec) -> Task {
    Task::single(Row::new(name, anchor, tol), move || {
        let r = problem.evaluate(&spec).map_err(|e| e.to_string())?;
        Ok(Outcome::one(r.lhs.value, r.rhs, r.lhs.evals as u64))
    })
}

fn table(name: &str, column: &str, rows: &[ConvergenceRow], param: fn(&ConvergenceRow) -> f64, scale: f64) -> (Table, f64) {
    let errs: Vec<f64> = rows.iter().map(|r| r.abs_err / scale).collect();
    let g = growth(&errs, TABLE_FLOOR);
    let t = Table {
        name: name.into(),
        paper_anchor: "truncation convergence".into(),
        columns: vec![column.into(), "rel_err".into()],
        rows: rows.iter().zip(&errs).map(|(r, e)| vec![param(r), *e]).collect(),
        monotone: g == 0.0,
    };
    (t, g)
}

fn convergence(name: &'static str, anchor: &'static str, problem: MBProblem) -> Task {
    let rows = vec![
        Row::fixed(format!("gustafson.{name}.table_n_max"), anchor, 1e-15),
        Row::fixed(format!("gustafson.{name}.table_nu_cutoff"), anchor, 1e-15),
    ];
    Task::new(rows, move || {
        let t = convergence_table(&problem, &MBSpec::default(), &N_LIST, &CUTOFFS).map_err(|e| e.to_string())?;
        let scale = t.rhs.norm();
        let (tn, gn) = table(&format!("gustafson.{name}.n_max"), "n_max", &t.n_sweep, |r| r.n_max as f64, scale);
        let (tc, gc) = table(&format!("gustafson.{name}.nu_cutoff"), "nu_cutoff", &t.cutoff_sweep, |r| r.nu_cutoff, scale);
        Ok(Outcome {
            values: vec![(real(gn), real(0.0)), (real(gc), real(0.0))],
            evals: 0,
            tables: vec![tn, tc],
        })
    })
}

pub(crate) fn tasks(rng: &mut ChaCha8Rng) -> Vec<Task> {
    let spec = |n_max: usize, sigma: u8| MBSpec {
        n_max,
        sigma,
        ..MBSpec::default()
    };
    let mut out = Vec::new();
    for sigma in [0, 1] {
        let params = random_params(rng, 2, sigma, (0.03, 0.2));
        let name = format!("gustafson.first_n1.sigma{sigma}");
        out.push(identity(name, FIRST, 1e-6, MBProblem::First { n: 1, params }, spec(40, sigma)));
    }
    let symmetric = MBParams {
        z_list: vec![MBPair::scalar(c64(0.2, 0.0)); 2],
        w_list: vec![MBPair::scalar(c64(0.2, 0.0)); 2],
    };
    out.push(identity("gustafson.first_n1.real".into(), FIRST, 1e-6, MBProblem::First { n: 1, params: symmetric }, spec(40, 0)));
    for sigma in [0, 1] {
        let params = random_params(rng, 3, sigma, (0.02, 0.12));
        let name = format!("gustafson.first_n2.sigma{sigma}");
        out.push(identity(name, FIRST, 1e-4, MBProblem::First { n: 2, params }, spec(30, sigma)));
    }
    let zetas = [
        ("unit", c64(1.0, 0.0)),
        ("phase", Complex64::from_polar(1.0, rng.gen_range(0.5..2.5))),
        ("inside", Complex64::from_polar(rng.gen_range(0.3..0.8), rng.gen_range(-3.0..3.0))),
        ("outside", Complex64::from_polar(rng.gen_range(1.3..2.0), rng.gen_range(-3.0..3.0))),
    ];
    for (k, (label, zeta)) in zetas.into_iter().enumerate() {
        let sigma = (k % 2) as u8;
        let params = random_params(rng, 1, sigma, (0.02, 0.12));
        let name = format!("gustafson.second_n1.{label}");
        out.push(identity(name, SECOND, 1e-6, MBProblem::Second { n: 1, params, zeta }, spec(shells_for(zeta, 40), sigma)));
    }
    for (label, zeta) in [("unit", c64(1.0, 0.0)), ("inside", Complex64::from_polar(0.6, rng.gen_range(-3.0..3.0)))] {
        let params = random_params(rng, 2, 0, (0.02, 0.1));
        let name = format!("gustafson.second_n2.{label}");
        out.push(identity(name, SECOND, 1e-4, MBProblem::Second { n: 2, params, zeta }, spec(shells_for(zeta, 40), 0)));
    }

    let rows = vec![
        Row::new("gustafson.j_omega_n2", J_OMEGA, 1e-4),
        Row::new("gustafson.j_omega_n2.via_second", J_OMEGA, 1e-10),
    ];
    out.push(Task::new(rows, || {
        let MBProblem::JOmega { x, x_prime, z, omega, zeta } = j_omega_problem() else {
            unreachable!()
        };
        let r = j_omega_check(&x, &x_prime, z, omega, zeta, &MBSpec::default()).map_err(|e| e.to_string())?;
        let c = &r.comparison;
        Ok(Outcome {
            values: vec![(c.lhs.value, c.rhs), (r.via_second, c.lhs.value)],
            evals: c.lhs.evals as u64,
            tables: Vec::new(),
        })
    }));

    out.push(convergence(
        "first_n1",
        FIRST,
        MBProblem::First {
            n: 1,
            params: MBParams {
                z_list: vec![MBPair::new(0, c64(0.1, 0.3)), MBPair::new(0, c64(0.15, -0.2))],
                w_list: vec![MBPair::new(0, c64(0.12, 0.1)), MBPair::new(2, c64(0.08, -0.4))],
            },
        },
    ));
    out.push(convergence(
        "first_n2",
        FIRST,
        MBProblem::First {
            n: 2,
            params: MBParams {
                z_list: vec![MBPair::new(0, c64(0.1, 0.3)), MBPair::new(2, c64(0.05, -0.2)), MBPair::new(0, c64(0.07, 0.5))],
                w_list: vec![MBPair::new(0, c64(0.12, 0.1)), MBPair::new(-2, c64(0.08, -0.4)), MBPair::new(0, c64(0.06, 0.0))],
            },
        },
    ));
    out.push(convergence(
        "second_n1",
        SECOND,
        MBProblem::Second {
            n: 1,
            params: MBParams {
                z_list: vec![MBPair::new(0, c64(0.1, 0.3))],
                w_list: vec![MBPair::new(2, c64(0.08, -0.4))],
            },
            zeta: c64(1.0, 0.0),
        },
    ));
    out.push(convergence("j_omega_n2", J_OMEGA, j_omega_problem()));
    out
}
