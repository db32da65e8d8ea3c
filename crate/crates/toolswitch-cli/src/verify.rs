//! `toolswitch verify`: randomized agreement checks across the four
//! evaluators, with an exact-oracle leg on instances small enough for it.

use crate::common::{load_instance, CliError};
use std::path::PathBuf;
use toolswitch::eval::{EvaluatorKind, Scratch};
use toolswitch::io::{serialize_instance, InstanceFormat};
use toolswitch::oracle::{tlp_dp_optimal_with_budget, OracleError};
use toolswitch::rng::{seeded, shuffle, uniform_below, Prng};
use toolswitch::{Instance, JobSequence};

/// Bounds for the random instance draw when no files are given: anywhere up
/// to benchmark scale, including magazines roomier than the whole demand.
const MAX_JOBS: usize = 40;
const MAX_TOOLS: usize = 60;
const MAX_CAPACITY: usize = 30;

/// State budget that limits the exact dynamic program to instances it
/// solves in microseconds; bigger draws skip the oracle leg.
const DP_BUDGET: u128 = 2_000;

#[derive(clap::Args)]
pub struct Args {
    /// Check these instance files (round-robin) instead of random draws.
    pub files: Vec<PathBuf>,
    /// Number of random (instance, sequence) trials.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Corrupt one result on the first trial to prove the detector works.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

pub fn run(args: Args, seed: u64) -> Result<(), CliError> {
    if args.trials == 0 {
        println!("warning: 0 trials requested, nothing was verified");
        return Ok(());
    }
    let files: Vec<Instance> = args
        .files
        .iter()
        .map(|path| load_instance(path, None))
        .collect::<Result<_, _>>()?;

    let mut rng = seeded(seed);
    let mut scratch = Scratch::new();
    let mut oracle_hits = 0u64;
    for trial in 0..args.trials {
        let inst = if files.is_empty() {
            random_instance(&mut rng)
        } else {
            files[trial as usize % files.len()].clone()
        };
        let seq = random_order(&mut rng, inst.num_jobs());

        let mut results = Vec::with_capacity(EvaluatorKind::ALL.len());
        for kind in EvaluatorKind::ALL {
            let res = kind
                .evaluate(&inst, &seq, &mut scratch)
                .map_err(CliError::usage)?;
            results.push((kind, res.switches));
        }
        if args.inject_fault && trial == 0 {
            results.last_mut().expect("four evaluators").1 += 1;
        }

        let reference = results[0].1;
        if results.iter().any(|&(_, switches)| switches != reference) {
            report_mismatch(trial, seed, &inst, &seq, &results, None);
            return Err(CliError::Mismatch);
        }
        match tlp_dp_optimal_with_budget(&inst, &seq, DP_BUDGET) {
            Ok(exact) => {
                oracle_hits += 1;
                if exact != reference {
                    report_mismatch(trial, seed, &inst, &seq, &results, Some(exact));
                    return Err(CliError::Mismatch);
                }
            }
            Err(OracleError::BudgetExceeded { .. } | OracleError::UniverseTooLarge { .. }) => {}
            Err(other) => return Err(CliError::usage(other)),
        }
    }
    println!(
        "verified {} trials: all evaluators agree ({oracle_hits} trials also matched the exact oracle)",
        args.trials
    );
    Ok(())
}

fn random_instance(rng: &mut Prng) -> Instance {
    let m = 2 + uniform_below(rng, (MAX_TOOLS - 1) as u64) as usize;
    let cap_bound = (m - 1).min(MAX_CAPACITY);
    let capacity = 1 + uniform_below(rng, cap_bound as u64) as usize;
    let n = 1 + uniform_below(rng, MAX_JOBS as u64) as usize;
    let mut pool: Vec<usize> = (0..m).collect();
    let lists: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let size = 1 + uniform_below(rng, capacity as u64) as usize;
            shuffle(rng, &mut pool);
            pool[..size].to_vec()
        })
        .collect();
    Instance::from_tool_lists(m, capacity, &lists).expect("draw respects the model bounds")
}

fn random_order(rng: &mut Prng, n: usize) -> JobSequence {
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(rng, &mut order);
    JobSequence::new(order).expect("shuffled identity stays a permutation")
}

/// Prints the failing trial as a self-contained fixture: values, order, the
/// instance in native format, and the command line that replays it.
fn report_mismatch(
    trial: u64,
    seed: u64,
    inst: &Instance,
    seq: &JobSequence,
    results: &[(EvaluatorKind, usize)],
    exact: Option<usize>,
) {
    println!("mismatch on trial {trial} (seed {seed}):");
    let values: Vec<String> = results
        .iter()
        .map(|(kind, switches)| format!("{kind}={switches}"))
        .collect();
    match exact {
        Some(exact) => println!("  {} exact-oracle={exact}", values.join(" ")),
        None => println!("  {}", values.join(" ")),
    }
    println!("  sequence: {seq}");
    println!("  instance (native format):");
    for line in serialize_instance(inst, InstanceFormat::Native).lines() {
        println!("    {line}");
    }
    println!(
        "  reproduce: toolswitch verify --seed {seed} --trials {}",
        trial + 1
    );
}
