//! `toolswitch evaluate`: the objective of one job order on one instance.

use crate::common::{load_instance, parse_evaluator, CliError};
use std::path::PathBuf;
use std::str::FromStr;
use toolswitch::eval::{ktns_trace, mpca_trace, EvaluatorKind, Scratch};
use toolswitch::io::InstanceFormat;
use toolswitch::model::EvalResult;
use toolswitch::{Instance, JobSequence, MagazineTrace};

#[derive(clap::Args)]
pub struct Args {
    /// Instance file (native or matrix format).
    pub file: PathBuf,
    /// Job order: comma-separated 1-based job ids, or "identity".
    #[arg(long, default_value = "identity")]
    pub sequence: String,
    #[arg(long, value_parser = parse_evaluator, default_value = "mpca-bitwise")]
    pub evaluator: EvaluatorKind,
    /// Skip format auto-detection.
    #[arg(long, value_parser = InstanceFormat::from_str)]
    pub format: Option<InstanceFormat>,
    /// Also print the magazine per instant (required tools starred) and,
    /// for the pipe evaluators, the constructed pipes. The witness comes
    /// from the exact walk of the chosen evaluator's family; the bitwise
    /// variants reach the same counts through equivalent magazines.
    #[arg(long)]
    pub trace: bool,
}

pub fn run(args: Args) -> Result<(), CliError> {
    let inst = load_instance(&args.file, args.format)?;
    let seq = parse_sequence(&args.sequence, inst.num_jobs())?;
    let mut scratch = Scratch::new();
    if !args.trace {
        let res = args
            .evaluator
            .evaluate(&inst, &seq, &mut scratch)
            .map_err(CliError::usage)?;
        print_result(res);
        return Ok(());
    }
    match args.evaluator {
        EvaluatorKind::Ktns | EvaluatorKind::KtnsBitwise => {
            let (res, trace) = ktns_trace(&inst, &seq, &mut scratch).map_err(CliError::usage)?;
            print_result(res);
            print_trace(&inst, &seq, &trace);
        }
        EvaluatorKind::Mpca | EvaluatorKind::MpcaBitwise => {
            let (res, trace, pipes) =
                mpca_trace(&inst, &seq, &mut scratch).map_err(CliError::usage)?;
            print_result(res);
            print_trace(&inst, &seq, &trace);
            for pipe in &pipes {
                println!(
                    "pipe: instants {}..{} tool {}",
                    pipe.start + 1,
                    pipe.end + 1,
                    pipe.tool + 1
                );
            }
        }
    }
    Ok(())
}

/// "identity" or comma-separated 1-based ids; `n` only sizes the identity,
/// wrong lengths surface later as a validation error.
fn parse_sequence(text: &str, n: usize) -> Result<JobSequence, CliError> {
    if text == "identity" {
        return Ok(JobSequence::identity(n));
    }
    let mut order = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        let id: usize = token
            .parse()
            .map_err(|_| CliError::Usage(format!("job id {token:?} is not an integer")))?;
        if id == 0 {
            return Err(CliError::Usage(
                "job ids are 1-based; 0 is not a job".into(),
            ));
        }
        order.push(id - 1);
    }
    JobSequence::new(order).map_err(CliError::usage)
}

fn print_result(res: EvalResult) {
    match res.pipes_count {
        Some(pipes) => println!("switches={} pipes={}", res.switches, pipes),
        None => println!("switches={}", res.switches),
    }
}

/// One row per instant: tool ids 1-based, ascending, the instant's required
/// tools marked with `*`.
fn print_trace(inst: &Instance, seq: &JobSequence, trace: &MagazineTrace) {
    for (k, state) in trace.states().iter().enumerate() {
        let job = seq.as_slice()[k];
        let required = inst.tools(job);
        let row: Vec<String> = state
            .iter()
            .map(|tool| {
                let mark = if required.contains(tool) { "*" } else { "" };
                format!("{}{mark}", tool + 1)
            })
            .collect();
        println!("instant {} (job {}): {}", k + 1, job + 1, row.join(" "));
    }
}
