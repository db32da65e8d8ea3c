//! Instance files, benchmark dataset specs, random sequence streams, and
//! results CSV.
//!
//! Two text formats are supported, both UTF-8 with LF endings, both headed
//! by a `n m C` line (jobs, tools, magazine capacity) and both using
//! 1-based tool and job indices:
//!
//! * **native**: one line per job, `k` followed by the `k` tool indices the
//!   job requires, ascending;
//! * **matrix**: `m` rows of `n` space-separated 0/1 entries, where row `i`
//!   column `j` says whether tool `i` is required by job `j`.
//!
//! Auto-detection first counts data lines (a native file has `n`, a matrix
//! file has `m`); when `n = m` it falls back to the shape of the first data
//! line, which is native exactly when its first token equals the number of
//! tokens that follow it. Files that are valid in both readings (possible
//! only for `n = m ≤ 2`) resolve to native; pass an explicit
//! [`InstanceFormat`] to override.

use crate::model::{Instance, JobSequence, ModelError};
use crate::rng::{seeded, shuffle, uniform_below, Prng};
use crate::toolset::ToolSet;
use std::fmt;
use thiserror::Error;

/// On-disk instance encodings; see the module docs for the layouts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InstanceFormat {
    Native,
    Matrix,
}

impl InstanceFormat {
    pub fn name(self) -> &'static str {
        match self {
            InstanceFormat::Native => "native",
            InstanceFormat::Matrix => "matrix",
        }
    }
}

impl fmt::Display for InstanceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for InstanceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "native" => Ok(InstanceFormat::Native),
            "matrix" => Ok(InstanceFormat::Matrix),
            other => Err(format!(
                "unknown format {other:?}, expected native or matrix"
            )),
        }
    }
}

/// A parse failure, pinned to a 1-based line of the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected header `n m C` (three integers)")]
    Header,
    #[error("token {token:?} is not an integer")]
    Number { token: String },
    #[error("expected {expected} items, found {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error("file ends before the declared {expected} data lines")]
    MissingLines { expected: usize },
    #[error("unexpected content after the declared data lines")]
    TrailingContent,
    #[error("tool index {value} outside 1..={num_tools}")]
    ToolIndex { value: usize, num_tools: usize },
    #[error("tool {value} listed twice for one job")]
    DuplicateTool { value: usize },
    #[error("matrix entry {token:?} is not 0 or 1")]
    MatrixEntry { token: String },
    #[error(
        "ambiguous data: {lines} lines fit neither {jobs} jobs (native) nor {tools} tools (matrix)"
    )]
    LineCount {
        lines: usize,
        jobs: usize,
        tools: usize,
    },
    #[error(transparent)]
    Validation(ModelError),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_number(line: usize, token: &str) -> Result<usize, ParseError> {
    token.parse().map_err(|_| {
        err(
            line,
            ParseErrorKind::Number {
                token: token.to_owned(),
            },
        )
    })
}

/// Parses an instance, auto-detecting the format.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let (header, data) = split_lines(text)?;
    let format = detect_format(&header, &data)?;
    parse_body(header, &data, format)
}

/// Parses an instance in a caller-chosen format, bypassing detection.
pub fn parse_instance_as(text: &str, format: InstanceFormat) -> Result<Instance, ParseError> {
    let (header, data) = split_lines(text)?;
    parse_body(header, &data, format)
}

struct Header {
    line: usize,
    num_jobs: usize,
    num_tools: usize,
    capacity: usize,
}

/// Non-blank data lines paired with their 1-based line numbers.
type DataLines<'a> = Vec<(usize, &'a str)>;

/// Header plus the non-blank data lines with their original line numbers.
fn split_lines(text: &str) -> Result<(Header, DataLines<'_>), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_line, header_text) = lines.next().ok_or(err(1, ParseErrorKind::Header))?;
    let tokens: Vec<&str> = header_text.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(err(header_line, ParseErrorKind::Header));
    }
    let mut numbers = [0usize; 3];
    for (slot, token) in numbers.iter_mut().zip(tokens.iter().copied()) {
        *slot = parse_number(header_line, token)
            .map_err(|_| err(header_line, ParseErrorKind::Header))?;
    }
    let header = Header {
        line: header_line,
        num_jobs: numbers[0],
        num_tools: numbers[1],
        capacity: numbers[2],
    };
    Ok((header, lines.collect()))
}

fn detect_format(header: &Header, data: &[(usize, &str)]) -> Result<InstanceFormat, ParseError> {
    let (n, m) = (header.num_jobs, header.num_tools);
    match (data.len() == n, data.len() == m) {
        (true, false) => Ok(InstanceFormat::Native),
        (false, true) => Ok(InstanceFormat::Matrix),
        (true, true) => {
            // n = m: decide by the first data line. A native job line's
            // leading token counts the entries after it.
            let (line, text) = data[0];
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let native_shaped = parse_number(line, tokens[0])
                .map(|first| first == tokens.len() - 1)
                .unwrap_or(false);
            Ok(if native_shaped {
                InstanceFormat::Native
            } else {
                InstanceFormat::Matrix
            })
        }
        (false, false) => Err(err(
            data.first().map_or(header.line + 1, |(l, _)| *l),
            ParseErrorKind::LineCount {
                lines: data.len(),
                jobs: n,
                tools: m,
            },
        )),
    }
}

fn parse_body(
    header: Header,
    data: &[(usize, &str)],
    format: InstanceFormat,
) -> Result<Instance, ParseError> {
    match format {
        InstanceFormat::Native => parse_native(header, data),
        InstanceFormat::Matrix => parse_matrix(header, data),
    }
}

fn check_data_len(
    header: &Header,
    data: &[(usize, &str)],
    expected: usize,
) -> Result<(), ParseError> {
    if data.len() < expected {
        let past_end = data.last().map_or(header.line, |(l, _)| *l) + 1;
        return Err(err(past_end, ParseErrorKind::MissingLines { expected }));
    }
    if data.len() > expected {
        return Err(err(data[expected].0, ParseErrorKind::TrailingContent));
    }
    Ok(())
}

fn parse_native(header: Header, data: &[(usize, &str)]) -> Result<Instance, ParseError> {
    let m = header.num_tools;
    check_data_len(&header, data, header.num_jobs)?;
    let mut lists: Vec<Vec<usize>> = Vec::with_capacity(data.len());
    for &(line, text) in data {
        let mut tokens = text.split_whitespace();
        let size = parse_number(line, tokens.next().expect("data lines are non-blank"))?;
        let mut tools = Vec::with_capacity(size);
        let mut actual = 0;
        for token in tokens {
            let value = parse_number(line, token)?;
            if value == 0 || value > m {
                return Err(err(
                    line,
                    ParseErrorKind::ToolIndex {
                        value,
                        num_tools: m,
                    },
                ));
            }
            if tools.contains(&(value - 1)) {
                return Err(err(line, ParseErrorKind::DuplicateTool { value }));
            }
            tools.push(value - 1);
            actual += 1;
        }
        if actual != size {
            return Err(err(
                line,
                ParseErrorKind::CountMismatch {
                    expected: size,
                    actual,
                },
            ));
        }
        lists.push(tools);
    }
    Instance::from_tool_lists(m, header.capacity, &lists).map_err(|e| {
        let line = match e {
            ModelError::EmptyJob { job } | ModelError::JobTooLarge { job, .. } => data[job].0,
            _ => header.line,
        };
        err(line, ParseErrorKind::Validation(e))
    })
}

fn parse_matrix(header: Header, data: &[(usize, &str)]) -> Result<Instance, ParseError> {
    let n = header.num_jobs;
    check_data_len(&header, data, header.num_tools)?;
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (tool, &(line, text)) in data.iter().enumerate() {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != n {
            return Err(err(
                line,
                ParseErrorKind::CountMismatch {
                    expected: n,
                    actual: tokens.len(),
                },
            ));
        }
        for (job, &token) in tokens.iter().enumerate() {
            match token {
                "0" => {}
                "1" => lists[job].push(tool),
                _ => {
                    return Err(err(
                        line,
                        ParseErrorKind::MatrixEntry {
                            token: token.to_owned(),
                        },
                    ))
                }
            }
        }
    }
    Instance::from_tool_lists(header.num_tools, header.capacity, &lists)
        .map_err(|e| err(header.line, ParseErrorKind::Validation(e)))
}

/// Renders an instance in the chosen format; parses back bit-exactly.
pub fn serialize_instance(inst: &Instance, format: InstanceFormat) -> String {
    let n = inst.num_jobs();
    let m = inst.num_tools();
    let mut out = format!("{} {} {}\n", n, m, inst.capacity());
    match format {
        InstanceFormat::Native => {
            for job in 0..n {
                let tools = inst.tools(job);
                out.push_str(&tools.len().to_string());
                for tool in tools.iter() {
                    out.push(' ');
                    out.push_str(&(tool + 1).to_string());
                }
                out.push('\n');
            }
        }
        InstanceFormat::Matrix => {
            for tool in 0..m {
                for job in 0..n {
                    if job > 0 {
                        out.push(' ');
                    }
                    out.push(if inst.tools(job).contains(tool) {
                        '1'
                    } else {
                        '0'
                    });
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Shape and seed of one benchmark dataset: how many instances to draw and
/// the distribution of each.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DatasetSpec {
    pub family: String,
    pub num_jobs: usize,
    pub num_tools: usize,
    pub capacity: usize,
    pub instances: usize,
    pub job_size_min: usize,
    pub job_size_max: usize,
    pub seed: u64,
}

/// Why a [`DatasetSpec`] cannot produce instances.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("a dataset needs at least one instance")]
    NoInstances,
    #[error("a dataset needs at least one job per instance")]
    NoJobs,
    #[error("capacity {capacity} must be below the tool count {num_tools}")]
    BadCapacity { capacity: usize, num_tools: usize },
    #[error("job sizes [{min}, {max}] must satisfy 1 <= min <= max <= capacity {capacity}")]
    BadJobSizes {
        min: usize,
        max: usize,
        capacity: usize,
    },
    #[error("gave up drawing {num_jobs} pairwise distinct job tool sets after {attempts} tries")]
    DistinctJobsExhausted { num_jobs: usize, attempts: usize },
}

/// Redraw budget per job before [`GenerateError::DistinctJobsExhausted`];
/// only reachable when the size bounds admit almost no distinct sets.
const DISTINCT_JOB_ATTEMPTS: usize = 10_000;

impl DatasetSpec {
    /// A spec with the default job-size bounds `[max(1, C/2), C]`, which
    /// keep the magazine under pressure without forcing every job to fill
    /// it.
    pub fn new(
        family: impl Into<String>,
        num_jobs: usize,
        num_tools: usize,
        capacity: usize,
        instances: usize,
        seed: u64,
    ) -> Self {
        DatasetSpec {
            family: family.into(),
            num_jobs,
            num_tools,
            capacity,
            instances,
            job_size_min: (capacity / 2).max(1),
            job_size_max: capacity,
            seed,
        }
    }

    pub fn with_job_sizes(mut self, min: usize, max: usize) -> Self {
        self.job_size_min = min;
        self.job_size_max = max;
        self
    }

    /// The sixteen standard benchmark families A1..D4. Within a letter the
    /// job and tool counts are fixed and only the magazine capacity grows.
    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        let (n, m, capacity) = match name {
            "A1" => (10, 10, 4),
            "A2" => (10, 10, 5),
            "A3" => (10, 10, 6),
            "A4" => (10, 10, 7),
            "B1" => (15, 20, 6),
            "B2" => (15, 20, 8),
            "B3" => (15, 20, 10),
            "B4" => (15, 20, 12),
            "C1" => (30, 40, 15),
            "C2" => (30, 40, 17),
            "C3" => (30, 40, 20),
            "C4" => (30, 40, 25),
            "D1" => (40, 60, 20),
            "D2" => (40, 60, 22),
            "D3" => (40, 60, 25),
            "D4" => (40, 60, 30),
            _ => return None,
        };
        Some(DatasetSpec::new(name, n, m, capacity, 10, seed))
    }

    pub const PRESET_NAMES: [&'static str; 16] = [
        "A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4", "C1", "C2", "C3", "C4", "D1", "D2", "D3",
        "D4",
    ];

    fn validate(&self) -> Result<(), GenerateError> {
        if self.instances == 0 {
            return Err(GenerateError::NoInstances);
        }
        if self.num_jobs == 0 {
            return Err(GenerateError::NoJobs);
        }
        if self.capacity >= self.num_tools {
            return Err(GenerateError::BadCapacity {
                capacity: self.capacity,
                num_tools: self.num_tools,
            });
        }
        if self.job_size_min < 1
            || self.job_size_min > self.job_size_max
            || self.job_size_max > self.capacity
        {
            return Err(GenerateError::BadJobSizes {
                min: self.job_size_min,
                max: self.job_size_max,
                capacity: self.capacity,
            });
        }
        Ok(())
    }
}

/// Draws `spec.instances` instances from one seeded stream. Job sizes are
/// uniform in the spec's bounds and tools are drawn uniformly without
/// replacement; a job exactly repeating an earlier job's tool set is
/// redrawn, so instances are never degenerate. Deterministic per seed.
pub fn generate_instances(spec: &DatasetSpec) -> Result<Vec<Instance>, GenerateError> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let mut pool: Vec<usize> = (0..spec.num_tools).collect();
    let mut out = Vec::with_capacity(spec.instances);
    for _ in 0..spec.instances {
        let mut jobs: Vec<ToolSet> = Vec::with_capacity(spec.num_jobs);
        for _ in 0..spec.num_jobs {
            let mut attempts = 0;
            let set = loop {
                let set = draw_job(&mut rng, spec, &mut pool);
                if !jobs.contains(&set) {
                    break set;
                }
                attempts += 1;
                if attempts >= DISTINCT_JOB_ATTEMPTS {
                    return Err(GenerateError::DistinctJobsExhausted {
                        num_jobs: spec.num_jobs,
                        attempts,
                    });
                }
            };
            jobs.push(set);
        }
        let inst = Instance::new(spec.num_tools, spec.capacity, jobs)
            .expect("generated jobs satisfy the spec bounds");
        out.push(inst);
    }
    Ok(out)
}

fn draw_job(rng: &mut Prng, spec: &DatasetSpec, pool: &mut [usize]) -> ToolSet {
    let span = (spec.job_size_max - spec.job_size_min + 1) as u64;
    let size = spec.job_size_min + uniform_below(rng, span) as usize;
    let m = pool.len();
    let mut set = ToolSet::empty(m);
    for i in 0..size {
        let j = i + uniform_below(rng, (m - i) as u64) as usize;
        pool.swap(i, j);
        set.insert(pool[i]);
    }
    set
}

/// Deterministic stream of uniform random job orders; see
/// [`random_sequences`].
#[derive(Debug)]
pub struct SequenceStream {
    rng: Prng,
    num_jobs: usize,
    remaining: usize,
}

impl Iterator for SequenceStream {
    type Item = JobSequence;

    fn next(&mut self) -> Option<JobSequence> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let mut order: Vec<usize> = (0..self.num_jobs).collect();
        shuffle(&mut self.rng, &mut order);
        Some(JobSequence::new(order).expect("a shuffle of the identity is a permutation"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for SequenceStream {}

/// `count` independent uniform permutations of `0..n`, reproducible per
/// seed (unbiased shuffle over a dedicated stream).
pub fn random_sequences(n: usize, count: usize, seed: u64) -> SequenceStream {
    SequenceStream {
        rng: seeded(seed),
        num_jobs: n,
        remaining: count,
    }
}

/// One benchmark measurement: a (dataset, evaluator) cell.
#[derive(Clone, PartialEq, Debug)]
pub struct BenchRow {
    pub dataset: String,
    pub num_jobs: usize,
    pub num_tools: usize,
    pub capacity: usize,
    pub evaluator: String,
    pub instances: usize,
    pub sequences: usize,
    pub total_seconds: f64,
    pub mean_microseconds_per_eval: f64,
}

/// The fixed results-CSV header. Adding evaluators adds rows, never
/// columns.
pub const RESULTS_CSV_HEADER: &str =
    "dataset,n,m,C,evaluator,instances,sequences,total_seconds,mean_microseconds_per_eval";

/// Renders benchmark rows as CSV text (header always present).
pub fn format_results_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(RESULTS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        debug_assert!(
            !row.dataset.contains(',') && !row.evaluator.contains(','),
            "labels must not need CSV quoting"
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.6},{:.3}\n",
            row.dataset,
            row.num_jobs,
            row.num_tools,
            row.capacity,
            row.evaluator,
            row.instances,
            row.sequences,
            row.total_seconds,
            row.mean_microseconds_per_eval,
        ));
    }
    out
}

/// Writes [`format_results_csv`] to any sink.
pub fn write_results_csv<W: std::io::Write>(mut out: W, rows: &[BenchRow]) -> std::io::Result<()> {
    out.write_all(format_results_csv(rows).as_bytes())
}

/// Reads CSV produced by [`format_results_csv`] back into rows.
pub fn parse_results_csv(text: &str) -> Result<Vec<BenchRow>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(err(1, ParseErrorKind::Header))?;
    if header != RESULTS_CSV_HEADER {
        return Err(err(1, ParseErrorKind::Header));
    }
    let mut rows = Vec::new();
    for (line, text) in lines {
        if text.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 9 {
            return Err(err(
                line,
                ParseErrorKind::CountMismatch {
                    expected: 9,
                    actual: fields.len(),
                },
            ));
        }
        let number = |token: &str| parse_number(line, token);
        let float = |token: &str| -> Result<f64, ParseError> {
            token.parse().map_err(|_| {
                err(
                    line,
                    ParseErrorKind::Number {
                        token: token.to_owned(),
                    },
                )
            })
        };
        rows.push(BenchRow {
            dataset: fields[0].to_owned(),
            num_jobs: number(fields[1])?,
            num_tools: number(fields[2])?,
            capacity: number(fields[3])?,
            evaluator: fields[4].to_owned(),
            instances: number(fields[5])?,
            sequences: number(fields[6])?,
            total_seconds: float(fields[7])?,
            mean_microseconds_per_eval: float(fields[8])?,
        });
    }
    Ok(rows)
}
