use cfield::c64;
use plane::QuadratureSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sov::{build_gamma, psi_derivatives, ChainSpec, EigenfunctionSpec, Impurity, Kind, SeparatedPoint, Spin};

use super::{real, Outcome, Row, Task};
use crate::VerifyError;

pub(crate) const CONFIGS: usize = 10;
const ATTEMPTS: usize = 1000;

fn random_chain(rng: &mut ChaCha8Rng) -> ChainSpec {
    ChainSpec {
        n: 2,
        spins: (0..2)
            .map(|_| Spin {
                n2: 2 * rng.gen_range(-1..=1),
                rho: rng.gen_range(-0.6..0.6),
            })
            .collect(),
        impurities: (0..2)
            .map(|_| Impurity {
                re: rng.gen_range(-0.5..0.5),
                im: 0.0,
            })
            .collect(),
        epsilon: 0.0,
    }
}

/// A configuration whose derivative kernels are oscillating (`[A], [B] ≠ −1`).
fn config(rng: &mut ChaCha8Rng, fixed: Option<&ChainSpec>) -> Result<EigenfunctionSpec, VerifyError> {
    for _ in 0..ATTEMPTS {
        let chain = fixed.cloned().unwrap_or_else(|| random_chain(rng));
        let parity = chain.spins.iter().map(|s| s.n2).sum::<i32>().rem_euclid(2);
        let x = SeparatedPoint::real(2 * rng.gen_range(-1..=1) + parity, rng.gen_range(-0.8..0.8));
        let p = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let g = build_gamma(&chain, Kind::B)?;
        let (Ok(a), Ok(b)) = (g.at(1).minus_ix(&x).exponent(), g.at(2).plus_ix(&x).exponent()) else {
            continue;
        };
        if a.m() != -1 && b.m() != -1 && p.norm() > 0.3 {
            return Ok(EigenfunctionSpec::b(chain, p, vec![x]));
        }
    }
    Err(VerifyError::Config("no admissible separated point for the given chain".into()))
}

pub(crate) fn tasks(rng: &mut ChaCha8Rng, chain: Option<&ChainSpec>) -> Result<Vec<Task>, VerifyError> {
    let zs = [c64(0.3, 0.2), c64(-0.4, 0.5)];
    let mut out = Vec::new();
    for k in 0..CONFIGS {
        let spec = config(rng, chain)?;
        spec.validate()?;
        let u = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let rows = vec![
            Row::new(format!("eigen.{k}.translation"), "iS⁻Ψ = pΨ", 1e-4),
            Row::new(format!("eigen.{k}.b_operator"), "B(u)Ψ = p(u − x)Ψ", 1e-3),
            Row::new(format!("eigen.{k}.annihilation"), "B(x₁)Ψ = 0", 1e-3),
        ];
        out.push(Task::new(rows, move || {
            let quad = QuadratureSpec::default().with_tol(1e-9, 1e-6);
            let d = psi_derivatives(&spec, &zs, &quad).map_err(|e| e.to_string())?;
            let x1 = spec.separated[0].x();
            Ok(Outcome {
                values: vec![
                    (d.translation(), spec.p * d.psi),
                    (d.b_action(&spec, u, &zs), spec.p * (u - x1) * d.psi),
                    (d.b_action(&spec, x1, &zs), real(0.0)),
                ],
                evals: d.evals as u64,
                tables: Vec::new(),
            })
        }));
    }
    Ok(out)
}
