//! `toolswitch bench`: timed evaluator sweeps over benchmark families.
//!
//! For every family the command generates its instances and one shared list
//! of random sequences per instance, then times each evaluator over the
//! identical workload. The monotonic clock wraps only the evaluation loop:
//! generation, warm-up, and I/O never count. One (instance, evaluator) pair
//! forms a timing cell; `--parallel` distributes whole cells across workers
//! while keeping each cell's measurement sequential, so parallelism changes
//! wall-clock time, never the workload a number describes.

use crate::common::{parse_evaluator, CliError};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};
use toolswitch::eval::{EvaluatorKind, Scratch};
use toolswitch::io::{
    format_results_csv, generate_instances, random_sequences, write_results_csv, BenchRow,
    DatasetSpec,
};
use toolswitch::rng::derive;
use toolswitch::{Instance, JobSequence};

#[derive(clap::Args)]
pub struct Args {
    /// Comma-separated preset families (A1..D4); default all sixteen.
    #[arg(long, value_delimiter = ',')]
    pub families: Vec<String>,
    /// Extra custom families, one `name jobs tools capacity [instances
    /// [size_min size_max]]` per line; `#` starts a comment.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Random sequences per instance.
    #[arg(long, default_value_t = 10_000)]
    pub sequences: usize,
    /// Instances per family (spec-file lines may name their own count).
    #[arg(long)]
    pub instances: Option<usize>,
    /// Comma-separated evaluators to time; the first is the speedup
    /// baseline.
    #[arg(
        long,
        value_parser = parse_evaluator,
        value_delimiter = ',',
        default_values = ["ktns", "ktns-bitwise", "mpca", "mpca-bitwise"]
    )]
    pub evaluators: Vec<EvaluatorKind>,
    /// Write the CSV to this file instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Worker threads for the timing cells (default 1: fully sequential).
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
}

pub fn run(args: Args, seed: u64) -> Result<(), CliError> {
    if args.sequences == 0 {
        return Err(CliError::Usage("--sequences must be at least 1".into()));
    }
    if args.parallel == 0 {
        return Err(CliError::Usage(
            "--parallel needs at least one worker".into(),
        ));
    }
    let specs = resolve_specs(&args, seed)?;
    let mut rows: Vec<BenchRow> = Vec::new();
    // Per evaluator, the per-family speedups vs the baseline evaluator.
    let mut speedups: Vec<Vec<f64>> = vec![Vec::new(); args.evaluators.len()];

    for (family_index, spec) in specs.iter().enumerate() {
        let instances = generate_instances(spec).map_err(CliError::usage)?;
        let sequences: Vec<Vec<JobSequence>> = (0..instances.len())
            .map(|i| {
                let salt = (family_index * 10_000 + i) as u64 + 1;
                random_sequences(spec.num_jobs, args.sequences, derive(seed, salt)).collect()
            })
            .collect();

        let totals = time_family(&instances, &sequences, &args.evaluators, args.parallel);

        println!(
            "family {}: n={} m={} C={}, {} instances x {} sequences",
            spec.family,
            spec.num_jobs,
            spec.num_tools,
            spec.capacity,
            instances.len(),
            args.sequences,
        );
        let evals = (instances.len() * args.sequences) as f64;
        let baseline = totals[0].as_secs_f64();
        for (which, (kind, total)) in args.evaluators.iter().zip(&totals).enumerate() {
            let secs = total.as_secs_f64();
            let mean_us = secs * 1e6 / evals;
            rows.push(BenchRow {
                dataset: spec.family.clone(),
                num_jobs: spec.num_jobs,
                num_tools: spec.num_tools,
                capacity: spec.capacity,
                evaluator: kind.name().to_owned(),
                instances: instances.len(),
                sequences: args.sequences,
                total_seconds: secs,
                mean_microseconds_per_eval: mean_us,
            });
            if which == 0 {
                println!(
                    "  {:<14} total {secs:>9.3}s  mean {mean_us:>9.3} us/eval",
                    kind.name()
                );
            } else {
                let speedup = baseline / secs;
                speedups[which].push(speedup);
                println!(
                    "  {:<14} total {secs:>9.3}s  mean {mean_us:>9.3} us/eval  speedup {speedup:.2}x",
                    kind.name()
                );
            }
        }
    }

    if args.evaluators.len() > 1 {
        let baseline = args.evaluators[0];
        let mean: Vec<String> = args.evaluators[1..]
            .iter()
            .zip(&speedups[1..])
            .map(|(kind, ratios)| {
                let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
                format!("{} {mean:.2}x", kind.name())
            })
            .collect();
        println!("mean speedup vs {}: {}", baseline.name(), mean.join(", "));
    }

    match &args.csv {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?;
            write_results_csv(file, &rows)
                .map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{}", format_results_csv(&rows)),
    }
    Ok(())
}

/// Sum of cell times per evaluator, cells being (instance, evaluator)
/// pairs. Workers pull cells from a shared cursor; every cell is timed
/// sequentially inside whichever worker runs it.
fn time_family(
    instances: &[Instance],
    sequences: &[Vec<JobSequence>],
    evaluators: &[EvaluatorKind],
    workers: usize,
) -> Vec<Duration> {
    let cells: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..evaluators.len()).map(move |e| (i, e)))
        .collect();
    let timings: Mutex<Vec<Duration>> = Mutex::new(vec![Duration::ZERO; cells.len()]);
    let cursor = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..workers.min(cells.len()) {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&(instance, evaluator)) = cells.get(index) else {
                    break;
                };
                let elapsed = time_cell(
                    &instances[instance],
                    &sequences[instance],
                    evaluators[evaluator],
                );
                timings.lock().expect("timing sink poisoned")[index] = elapsed;
            });
        }
    });

    let timings = timings.into_inner().expect("timing sink poisoned");
    let mut totals = vec![Duration::ZERO; evaluators.len()];
    for (&(_, evaluator), elapsed) in cells.iter().zip(timings) {
        totals[evaluator] += elapsed;
    }
    totals
}

fn time_cell(inst: &Instance, sequences: &[JobSequence], kind: EvaluatorKind) -> Duration {
    let mut scratch = Scratch::new();
    let evaluate = |seq: &JobSequence, scratch: &mut Scratch| {
        kind.evaluate(inst, seq, scratch)
            .expect("benchmark instances are valid")
            .switches
    };
    // Untimed warm-up: first touch allocates scratch buffers and faults in
    // the instance.
    std::hint::black_box(evaluate(&sequences[0], &mut scratch));

    let started = Instant::now();
    let mut checksum = 0usize;
    for seq in sequences {
        checksum = checksum.wrapping_add(evaluate(seq, &mut scratch));
    }
    let elapsed = started.elapsed();
    std::hint::black_box(checksum);
    elapsed
}

fn resolve_specs(args: &Args, seed: u64) -> Result<Vec<DatasetSpec>, CliError> {
    let mut specs = Vec::new();
    let preset_names: Vec<String> = if args.families.is_empty() && args.spec.is_none() {
        DatasetSpec::PRESET_NAMES
            .iter()
            .map(|&name| name.to_owned())
            .collect()
    } else {
        args.families.clone()
    };
    for name in &preset_names {
        let mut spec = DatasetSpec::preset(name, seed)
            .ok_or_else(|| CliError::Usage(format!("unknown family {name:?} (presets A1..D4)")))?;
        if let Some(instances) = args.instances {
            spec.instances = instances;
        }
        specs.push(spec);
    }
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path)
            .map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))?;
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            specs.push(parse_spec_line(line, args, seed).map_err(|why| {
                CliError::Usage(format!("{} line {}: {why}", path.display(), number + 1))
            })?);
        }
    }
    if specs.is_empty() {
        return Err(CliError::Usage("no families to benchmark".into()));
    }
    Ok(specs)
}

fn parse_spec_line(line: &str, args: &Args, seed: u64) -> Result<DatasetSpec, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if !matches!(tokens.len(), 4 | 5 | 7) {
        return Err("expected `name jobs tools capacity [instances [size_min size_max]]`".into());
    }
    let number = |token: &str| -> Result<usize, String> {
        token
            .parse()
            .map_err(|_| format!("{token:?} is not a count"))
    };
    let mut spec = DatasetSpec::new(
        tokens[0],
        number(tokens[1])?,
        number(tokens[2])?,
        number(tokens[3])?,
        match tokens.get(4) {
            Some(&token) => number(token)?,
            None => args.instances.unwrap_or(10),
        },
        seed,
    );
    if tokens.len() == 7 {
        spec = spec.with_job_sizes(number(tokens[5])?, number(tokens[6])?);
    }
    Ok(spec)
}
