//! Command line for the tool switching toolkit: evaluate job orders,
//! cross-check the evaluators, benchmark them, search for good orders, and
//! generate benchmark datasets.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a disagreement, 2 for
//! usage, parse, or validation problems.

mod bench;
mod common;
mod evaluate;
mod gen;
mod solve;
mod verify;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "toolswitch",
    version,
    about = "Job sequencing and tool switching toolkit"
)]
struct Cli {
    /// Seed for every random draw; falls back to $TOOLSWITCH_SEED, then 1.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the switch count of one job order on one instance.
    Evaluate(evaluate::Args),
    /// Cross-check the four evaluators (and the exact oracle) on random
    /// workloads.
    Verify(verify::Args),
    /// Time the evaluators over benchmark families and emit CSV.
    Bench(bench::Args),
    /// Search for a low-switch job order.
    Solve(solve::Args),
    /// Generate benchmark instance files.
    Gen(gen::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match common::resolve_seed(cli.seed) {
        Ok(seed) => seed,
        Err(err) => return err.report(),
    };
    let result = match cli.command {
        Command::Evaluate(args) => evaluate::run(args),
        Command::Verify(args) => verify::run(args, seed),
        Command::Bench(args) => bench::run(args, seed),
        Command::Solve(args) => solve::run(args, seed),
        Command::Gen(args) => gen::run(args, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.report(),
    }
}
