use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sov_verify::{emit_report, eval_point, load_chain, reduce_diagram, run_suite, EvalFunction, EvalPoint, Format, Suite, SuiteConfig, VerifyError};

#[derive(Parser)]
#[command(name = "sov-verify", version, about = "Numeric verification suites for separated-variable spin chain identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a report.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides every per-check tolerance of the selected suites.
        #[arg(long)]
        tol: Option<f64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Reduce a diagram to its closed form.
    Reduce {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate Ψ or Φ at a point.
    Eval {
        #[arg(value_enum)]
        function: EvalFunction,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, VerifyError> {
    std::fs::read_to_string(path).map_err(|e| VerifyError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn threads() -> Result<(), VerifyError> {
    let Ok(v) = std::env::var("SOV_VERIFY_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| VerifyError::Config(format!("SOV_VERIFY_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| VerifyError::Config(e.to_string()))
}

fn execute(cli: Cli) -> Result<bool, VerifyError> {
    threads()?;
    match cli.command {
        Command::Run {
            suite,
            chain,
            seed,
            tol,
            budget,
            out,
            format,
        } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = SuiteConfig::new(suite);
            cfg.chain_file = chain;
            cfg.seed = seed;
            cfg.budget = budget;
            if let Some(t) = tol {
                cfg.tolerances.insert(suite.name().into(), t);
            }
            match run_suite(&cfg) {
                Ok(report) => {
                    emit_report(&report, out.as_deref(), format)?;
                    Ok(report.all_pass())
                }
                Err(VerifyError::BudgetExceeded { budget, skipped, report }) => {
                    emit_report(&report, out.as_deref(), format)?;
                    Err(VerifyError::BudgetExceeded {
                        budget,
                        skipped,
                        report,
                    })
                }
                Err(e) => Err(e),
            }
        }
        Command::Reduce { diagram, out } => {
            let reduced = reduce_diagram(&read(&diagram)?)?;
            std::fs::write(&out, reduced + "\n").map_err(|e| VerifyError::Io {
                path: out.display().to_string(),
                source: e,
            })?;
            Ok(true)
        }
        Command::Eval { function, chain, point } => {
            let chain = load_chain(&chain)?;
            let point: EvalPoint = serde_json::from_str(&read(&point)?)?;
            let v = eval_point(function, &chain, &point)?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(v.converged)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("sov-verify: {e}");
            ExitCode::from(2)
        }
    }
}
