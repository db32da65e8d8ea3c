//! `toolswitch solve`: search for a low-switch job order.
//!
//! The default mode runs the iterated local search under an evaluation
//! budget; `--exact` enumerates every permutation instead, which is only
//! viable for small job counts but certifies the optimum.

use crate::common::{load_instance, parse_evaluator, parse_neighborhood, CliError};
use std::path::PathBuf;
use std::time::Duration;
use toolswitch::eval::{EvaluatorKind, Scratch};
use toolswitch::io::InstanceFormat;
use toolswitch::oracle::jesp_exhaustive;
use toolswitch::solver::{ils_solve, Neighborhood, SolverConfig};

/// Exhaustive search walks n! orders; past this job count a single run
/// would take hours, so the command refuses rather than hang.
const EXACT_MAX_JOBS: usize = 8;

#[derive(clap::Args)]
pub struct Args {
    /// Instance file to solve.
    pub file: PathBuf,
    /// Evaluator scoring each candidate order.
    #[arg(long, value_parser = parse_evaluator, default_value = "mpca-bitwise")]
    pub evaluator: EvaluatorKind,
    /// Evaluation budget for the heuristic search.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    /// Random swaps applied when kicking out of a local optimum.
    #[arg(long, default_value_t = 3)]
    pub kick: usize,
    /// Local-search neighborhood: adjacent-swap, any-swap, or shift.
    #[arg(long, value_parser = parse_neighborhood, default_value = "any-swap")]
    pub neighborhood: Neighborhood,
    /// Wall-clock cap in seconds for the heuristic search.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Enumerate every permutation instead of searching heuristically.
    #[arg(long)]
    pub exact: bool,
    /// Input format; omitted means detect from the file shape.
    #[arg(long)]
    pub format: Option<InstanceFormat>,
}

pub fn run(args: Args, seed: u64) -> Result<(), CliError> {
    let inst = load_instance(&args.file, args.format)?;
    if args.exact {
        if inst.num_jobs() > EXACT_MAX_JOBS {
            return Err(CliError::Usage(format!(
                "--exact enumerates all {}! orders; it is capped at {EXACT_MAX_JOBS} jobs",
                inst.num_jobs()
            )));
        }
        let mut scratch = Scratch::new();
        let mut evaluations = 0u64;
        let (best, switches) = jesp_exhaustive(&inst, |inst, seq| {
            evaluations += 1;
            args.evaluator
                .evaluate(inst, seq, &mut scratch)
                .expect("enumerated orders are complete permutations")
                .switches
        })
        .map_err(CliError::usage)?;
        println!("sequence={best}");
        println!("switches={switches}");
        println!("evaluations={evaluations}");
        println!("mode=exact");
        return Ok(());
    }

    if args.budget == 0 {
        return Err(CliError::Usage("--budget must be at least 1".into()));
    }
    if args.kick == 0 {
        return Err(CliError::Usage("--kick must be at least 1".into()));
    }
    let time_limit = match args.time_limit {
        Some(seconds) => {
            if !seconds.is_finite() || seconds < 0.0 {
                return Err(CliError::Usage(format!(
                    "--time-limit wants a non-negative number of seconds, not {seconds}"
                )));
            }
            Some(Duration::from_secs_f64(seconds))
        }
        None => None,
    };
    let outcome = ils_solve(
        &inst,
        &SolverConfig {
            evaluator: args.evaluator,
            max_evaluations: args.budget,
            perturbation_strength: args.kick,
            neighborhood: args.neighborhood,
            seed,
            time_limit,
        },
    );
    println!("sequence={}", outcome.best);
    println!("switches={}", outcome.switches);
    println!("evaluations={}", outcome.evaluations_used);
    println!("mode=heuristic");
    Ok(())
}
