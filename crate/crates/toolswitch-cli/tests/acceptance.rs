//! The release gate: every externally promised behavior, checked in one
//! run with one PASS/FAIL line per criterion.
//!
//! Each criterion is a standalone function; the single `acceptance` test
//! runs them all (panics contained per criterion), prints the verdict
//! lines, and fails if any criterion failed. Run with `--nocapture` to see
//! the lines as they happen:
//!
//! ```text
//! cargo test -p toolswitch-cli --test acceptance -- --nocapture
//! ```

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use toolswitch::eval::{self, EvaluatorKind, Scratch};
use toolswitch::io::{
    generate_instances, parse_instance, parse_results_csv, random_sequences, serialize_instance,
    DatasetSpec, InstanceFormat,
};
use toolswitch::oracle;
use toolswitch::rng::{derive, seeded, uniform_below};
use toolswitch::solver::{ils_solve, SolverConfig};
use toolswitch::{Instance, JobSequence};

/// The six-job, ten-tool, capacity-five example whose counts are pinned by
/// hand: 5 switches and 10 pipes in file order, 3 switches when reordered
/// to 1,2,5,3,4,6.
fn sample6() -> Instance {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sample6.txt");
    let text = fs::read_to_string(&path).expect("fixture must be readable");
    parse_instance(&text).expect("fixture must parse")
}

/// 0-based form of the reordering 1,2,5,3,4,6.
fn sample6_best_order() -> JobSequence {
    JobSequence::new(vec![0, 1, 4, 2, 3, 5]).expect("valid permutation")
}

fn cli() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toolswitch"));
    cmd.env_remove("TOOLSWITCH_SEED");
    cmd
}

/// Scratch directory removed on drop.
struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        static COUNTER: AtomicUsize = AtomicUsize::new(0);
        let id = COUNTER.fetch_add(1, Ordering::Relaxed);
        let dir = std::env::temp_dir().join(format!(
            "toolswitch-acceptance-{}-{}-{}",
            std::process::id(),
            tag,
            id
        ));
        fs::create_dir_all(&dir).expect("temp dir must be creatable");
        TempDir(dir)
    }

    fn path(&self) -> &Path {
        &self.0
    }

    fn join(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

/// One random instance drawn from a single-instance dataset spec.
fn random_instance(tag: &str, n: usize, m: usize, c: usize, seed: u64) -> Instance {
    let spec = DatasetSpec::new(tag, n, m, c, 1, seed).with_job_sizes(1, c);
    generate_instances(&spec)
        .expect("sizes are validated by the caller")
        .pop()
        .expect("one instance requested")
}

/// Instance shapes spanning the benchmark range: n up to 40, m up to 60,
/// C up to min(m - 1, 30). Jobs never outnumber tools, and capacity 1 is
/// only drawn with tools to spare, so the generator can always find
/// pairwise distinct tool sets.
fn random_shape(rng: &mut toolswitch::rng::Prng) -> (usize, usize, usize) {
    let m = 4 + uniform_below(rng, 57) as usize;
    let n = 2 + uniform_below(rng, (m.min(40) - 1) as u64) as usize;
    let cap_lo = if m >= 2 * n { 1 } else { 2 };
    let cap_hi = (m - 1).min(30);
    let c = cap_lo + uniform_below(rng, (cap_hi - cap_lo + 1) as u64) as usize;
    (n, m, c)
}

/// Criterion 1: the hand-checked counts on the six-job example, agreed on
/// by all four evaluators, in under a millisecond.
fn golden_example() {
    let inst = sample6();
    let identity = JobSequence::identity(inst.num_jobs());
    let best = sample6_best_order();
    let mut scratch = Scratch::new();

    // Warm-up pass so the timed block measures evaluation, not first-touch
    // allocation of scratch buffers.
    for kind in EvaluatorKind::ALL {
        kind.evaluate(&inst, &identity, &mut scratch)
            .expect("fixture evaluates");
    }

    let timer = Instant::now();
    let mut results = Vec::new();
    for kind in EvaluatorKind::ALL {
        let id = kind
            .evaluate(&inst, &identity, &mut scratch)
            .expect("fixture evaluates");
        let reordered = kind
            .evaluate(&inst, &best, &mut scratch)
            .expect("fixture evaluates");
        results.push((kind, id, reordered));
    }
    let elapsed = timer.elapsed();

    for (kind, id, reordered) in results {
        assert_eq!(
            id.switches, 5,
            "{kind}: identity order must cost 5 switches"
        );
        assert_eq!(
            reordered.switches, 3,
            "{kind}: reordering must cost 3 switches"
        );
        if let Some(pipes) = id.pipes_count {
            assert_eq!(pipes, 10, "{kind}: identity order must build 10 pipes");
        }
    }
    assert!(
        elapsed < Duration::from_millis(1),
        "eight evaluations took {elapsed:?}, budget is 1 ms"
    );
}

/// Criterion 2: brute force over all 720 orders of the example certifies
/// the optimum 3, achieved by the named reordering, in under a second.
fn exhaustive_optimum() {
    let inst = sample6();
    let mut scratch = Scratch::new();
    let timer = Instant::now();
    let (_, optimum) = oracle::jesp_exhaustive(&inst, |i, s| {
        EvaluatorKind::MpcaBitwise
            .evaluate(i, s, &mut scratch)
            .expect("fixture evaluates")
            .switches
    })
    .expect("six jobs are within the exhaustive cap");
    let elapsed = timer.elapsed();

    assert_eq!(optimum, 3, "exhaustive optimum");
    let named = EvaluatorKind::MpcaBitwise
        .evaluate(&inst, &sample6_best_order(), &mut scratch)
        .expect("fixture evaluates");
    assert_eq!(
        named.switches, optimum,
        "the named order must achieve the optimum"
    );
    assert!(
        elapsed < Duration::from_secs(1),
        "exhaustive search took {elapsed:?}, budget is 1 s"
    );
}

/// Criterion 3: ten thousand random (instance, sequence) pairs across the
/// full benchmark size range, zero switch-count mismatches among the four
/// evaluators, in under a minute.
fn four_way_equality() {
    let mut rng = seeded(301);
    let mut scratch = Scratch::new();
    let timer = Instant::now();
    for trial in 0..10_000u64 {
        let (n, m, c) = random_shape(&mut rng);
        let inst = random_instance("equality", n, m, c, derive(301, trial + 1));
        let seq = random_sequences(n, 1, derive(302, trial + 1))
            .next()
            .expect("one sequence requested");

        let baseline = EvaluatorKind::Ktns
            .evaluate(&inst, &seq, &mut scratch)
            .expect("generated inputs are valid");
        let mut mpca_pipes = None;
        for kind in [
            EvaluatorKind::KtnsBitwise,
            EvaluatorKind::Mpca,
            EvaluatorKind::MpcaBitwise,
        ] {
            let result = kind
                .evaluate(&inst, &seq, &mut scratch)
                .expect("generated inputs are valid");
            assert_eq!(
                result.switches, baseline.switches,
                "trial {trial} (n={n} m={m} C={c}): {kind} disagrees with ktns"
            );
            if let Some(pipes) = result.pipes_count {
                if let Some(previous) = mpca_pipes.replace(pipes) {
                    assert_eq!(
                        pipes, previous,
                        "trial {trial} (n={n} m={m} C={c}): pipe counts disagree"
                    );
                }
            }
        }
    }
    let elapsed = timer.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "equality sweep took {elapsed:?}, budget is 60 s"
    );
}

/// Criterion 4: on a thousand tiny instances, twenty sequences each, the
/// greedy evaluator matches the dynamic-programming optimum exactly, in
/// under a minute.
fn oracle_equality() {
    let mut rng = seeded(401);
    let mut scratch = Scratch::new();
    let timer = Instant::now();
    for trial in 0..1_000u64 {
        let m = 4 + uniform_below(&mut rng, 5) as usize;
        let n = 2 + uniform_below(&mut rng, (m.min(6) - 1) as u64) as usize;
        let cap_lo = if m >= 2 * n { 1 } else { 2 };
        let cap_hi = (m - 1).min(4);
        let c = cap_lo + uniform_below(&mut rng, (cap_hi - cap_lo + 1) as u64) as usize;
        let inst = random_instance("oracle", n, m, c, derive(401, trial + 1));
        for (index, seq) in random_sequences(n, 20, derive(402, trial + 1)).enumerate() {
            let greedy =
                eval::ktns_evaluate(&inst, &seq, &mut scratch).expect("generated inputs are valid");
            let optimal =
                oracle::tlp_dp_optimal(&inst, &seq).expect("tiny instances fit the DP budget");
            assert_eq!(
                greedy.switches, optimal,
                "trial {trial} sequence {index} (n={n} m={m} C={c}): greedy is not optimal"
            );
        }
    }
    let elapsed = timer.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "oracle sweep took {elapsed:?}, budget is 60 s"
    );
}

/// Criterion 5: on a thousand random cases, magazine traces are feasible
/// and agree with the reported switch count, and pipe sets pass the full
/// structural validator, in under a minute.
fn trace_validity() {
    let mut rng = seeded(501);
    let mut scratch = Scratch::new();
    let timer = Instant::now();
    for trial in 0..1_000u64 {
        let (n, m, c) = random_shape(&mut rng);
        let inst = random_instance("traces", n, m, c, derive(501, trial + 1));
        let seq = random_sequences(n, 1, derive(502, trial + 1))
            .next()
            .expect("one sequence requested");
        let label = format!("trial {trial} (n={n} m={m} C={c})");

        let (result, trace) =
            eval::ktns_trace(&inst, &seq, &mut scratch).expect("generated inputs are valid");
        let states = trace.states();
        assert_eq!(states.len(), n, "{label}: trace must cover every instant");
        for (k, &job) in seq.as_slice().iter().enumerate() {
            let state = &states[k];
            assert!(
                inst.tools(job).is_subset(state),
                "{label}: instant {k} is missing required tools"
            );
            assert!(
                state.len() <= c,
                "{label}: instant {k} overfills the magazine"
            );
            if trace.full_capacity() {
                assert_eq!(
                    state.len(),
                    c,
                    "{label}: instant {k} must fill the magazine"
                );
            }
        }
        let via_arcs = oracle::switches_via_arcs(&trace).expect("trace arcs must be consistent");
        assert_eq!(
            via_arcs, result.switches,
            "{label}: arc count disagrees with the evaluator"
        );

        let (result, trace, pipes) =
            eval::mpca_trace(&inst, &seq, &mut scratch).expect("generated inputs are valid");
        if let Err(violation) = oracle::validate_pipe_set(&trace, &pipes, &inst, &seq) {
            panic!("{label}: invalid pipe set: {violation}");
        }
        assert_eq!(
            result.pipes_count,
            Some(pipes.len()),
            "{label}: pipe count disagrees with the trace"
        );
    }
    let elapsed = timer.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "trace sweep took {elapsed:?}, budget is 60 s"
    );
}

/// Criterion 6: the full benchmark sweep (sixteen families, ten instances,
/// ten thousand sequences) completes within ten minutes and lands in the
/// expected order: on the D families in aggregate, mpca-bitwise is at
/// least five times faster than ktns and no slower than scalar mpca,
/// which is no slower than ktns.
fn benchmark_shape() {
    let dir = TempDir::new("bench");
    let csv_path = dir.join("results.csv");
    let timer = Instant::now();
    let output = cli()
        .args([
            "bench",
            "--sequences",
            "10000",
            "--instances",
            "10",
            "--csv",
        ])
        .arg(&csv_path)
        .output()
        .expect("bench must spawn");
    let elapsed = timer.elapsed();
    assert!(
        output.status.success(),
        "bench failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(
        elapsed <= Duration::from_secs(600),
        "bench took {elapsed:?}, budget is 600 s"
    );

    let text = fs::read_to_string(&csv_path).expect("bench must write the CSV");
    let rows = parse_results_csv(&text).expect("CSV must round-trip");
    assert_eq!(rows.len(), 16 * 4, "sixteen families x four evaluators");
    for name in DatasetSpec::PRESET_NAMES {
        let per_family = rows.iter().filter(|r| r.dataset == name).count();
        assert_eq!(
            per_family, 4,
            "family {name} must have one row per evaluator"
        );
    }

    let d_total = |evaluator: &str| -> f64 {
        rows.iter()
            .filter(|r| r.dataset.starts_with('D') && r.evaluator == evaluator)
            .map(|r| r.total_seconds)
            .sum()
    };
    let ktns = d_total("ktns");
    let mpca = d_total("mpca");
    let mpca_bitwise = d_total("mpca-bitwise");
    assert!(mpca_bitwise > 0.0, "timings must be positive");
    let speedup = ktns / mpca_bitwise;
    assert!(
        speedup >= 5.0,
        "mean D-family speedup of mpca-bitwise over ktns is {speedup:.1}x, need at least 5x"
    );
    assert!(
        mpca_bitwise <= mpca && mpca <= ktns,
        "D-family totals out of order: mpca-bitwise {mpca_bitwise:.3}s, mpca {mpca:.3}s, \
         ktns {ktns:.3}s"
    );
}

/// Criterion 7: across every benchmark family, the pruned evaluator's
/// inner-loop iteration count stays within n * (max pipe span + 1) on
/// every single evaluation.
fn iteration_bound() {
    let mut scratch = Scratch::new();
    for (family, name) in DatasetSpec::PRESET_NAMES.into_iter().enumerate() {
        let spec = DatasetSpec::preset(name, 1).expect("preset names are exhaustive");
        let instances = generate_instances(&spec).expect("presets are valid");
        for (index, inst) in instances.iter().enumerate() {
            let n = inst.num_jobs();
            let salt = (family * 1_000 + index) as u64 + 1;
            for seq in random_sequences(n, 100, derive(701, salt)) {
                EvaluatorKind::MpcaBitwise
                    .evaluate(inst, &seq, &mut scratch)
                    .expect("generated inputs are valid");
                let stats = scratch.mpca_bitwise_stats();
                assert!(
                    stats.inner_iterations <= n * (stats.max_pipe_span + 1),
                    "{name} instance {index}: {} iterations exceed n*(l+1) = {}*{}",
                    stats.inner_iterations,
                    n,
                    stats.max_pipe_span + 1
                );
            }
        }
    }
}

/// Criterion 8: one seed, one output. Datasets, sequences, solver runs,
/// generated files, and benchmark CSV rows (timings aside) must reproduce
/// byte for byte.
fn determinism() {
    let spec = DatasetSpec::preset("C2", 9).expect("C2 is a preset");
    let first = generate_instances(&spec).expect("presets are valid");
    let second = generate_instances(&spec).expect("presets are valid");
    assert_eq!(first, second, "same spec, same instances");
    let serialize = |xs: &[Instance]| -> Vec<String> {
        xs.iter()
            .map(|i| serialize_instance(i, InstanceFormat::Native))
            .collect()
    };
    assert_eq!(
        serialize(&first),
        serialize(&second),
        "same spec, same bytes"
    );

    let first_draw: Vec<JobSequence> = random_sequences(40, 1_000, 42).collect();
    let second_draw: Vec<JobSequence> = random_sequences(40, 1_000, 42).collect();
    assert_eq!(first_draw, second_draw, "same seed, same sequences");

    let config = SolverConfig {
        max_evaluations: 5_000,
        seed: 42,
        ..SolverConfig::default()
    };
    assert_eq!(
        ils_solve(&first[0], &config),
        ils_solve(&first[0], &config),
        "same seed, same trajectory"
    );

    let bench_rows = |tag: &str| -> Vec<String> {
        let dir = TempDir::new(tag);
        let csv_path = dir.join("results.csv");
        let output = cli()
            .args([
                "bench",
                "--families",
                "A1",
                "--sequences",
                "50",
                "--instances",
                "2",
                "--csv",
            ])
            .arg(&csv_path)
            .output()
            .expect("bench must spawn");
        assert!(
            output.status.success(),
            "{}",
            String::from_utf8_lossy(&output.stderr)
        );
        let text = fs::read_to_string(&csv_path).expect("bench must write the CSV");
        // Drop the two timing columns; everything else must reproduce.
        text.lines()
            .map(|line| line.split(',').take(7).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(
        bench_rows("csv-a"),
        bench_rows("csv-b"),
        "same seed, same CSV rows"
    );

    let generated = |tag: &str| -> Vec<(String, Vec<u8>)> {
        let dir = TempDir::new(tag);
        let output = cli()
            .args(["--seed", "5", "gen", "--family", "B3", "--out"])
            .arg(dir.path())
            .output()
            .expect("gen must spawn");
        assert!(
            output.status.success(),
            "{}",
            String::from_utf8_lossy(&output.stderr)
        );
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.path())
            .expect("gen must populate the directory")
            .map(|entry| {
                let entry = entry.expect("directory must be readable");
                let name = entry.file_name().to_string_lossy().into_owned();
                let bytes = fs::read(entry.path()).expect("file must be readable");
                (name, bytes)
            })
            .collect();
        files.sort();
        files
    };
    assert_eq!(
        generated("gen-a"),
        generated("gen-b"),
        "same seed, same files"
    );
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 8] = [
        ("1 (golden example counts)", golden_example),
        ("2 (exhaustive optimum)", exhaustive_optimum),
        ("3 (four-way evaluator equality)", four_way_equality),
        ("4 (greedy matches DP optimum)", oracle_equality),
        ("5 (trace validity)", trace_validity),
        ("6 (benchmark shape and ordering)", benchmark_shape),
        ("7 (inner iteration bound)", iteration_bound),
        ("8 (determinism)", determinism),
    ];

    let mut failures = Vec::new();
    for (label, check) in criteria {
        let timer = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = timer.elapsed();
        let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!(
            "criterion {label}: {verdict} [{:.1}s]",
            elapsed.as_secs_f64()
        );
        if outcome.is_err() {
            failures.push(label);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
