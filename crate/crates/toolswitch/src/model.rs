//! Problem instances, job orders, and the result/trace types every
//! evaluator shares.
//!
//! An [`Instance`] can only be built through validation, so the rest of the
//! crate treats one as proof that the invariants hold: at least one job, each
//! job needs between 1 and `capacity` tools, `capacity < num_tools`, and all
//! tool indices are in range. Everything here is immutable after
//! construction and freely shareable across threads.

use crate::toolset::ToolSet;
use thiserror::Error;

/// Violations detected while building instances or sequences.
///
/// Index fields are 0-based like the rest of the API; rendered messages use
/// 1-based numbers to match the file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("instance has no jobs")]
    NoJobs,
    #[error("capacity {capacity} must be strictly below the tool count {num_tools}")]
    CapacityNotBelowToolCount { capacity: usize, num_tools: usize },
    #[error("job {} requires no tools", .job + 1)]
    EmptyJob { job: usize },
    #[error("job {} requires {size} tools, more than the magazine capacity {capacity}", .job + 1)]
    JobTooLarge {
        job: usize,
        size: usize,
        capacity: usize,
    },
    #[error("job {} references tool {} but there are only {num_tools} tools", .job + 1, .tool + 1)]
    BadToolIndex {
        job: usize,
        tool: usize,
        num_tools: usize,
    },
    #[error("sequence length {actual} does not match the job count {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("sequence entry {position} (job {}) is out of range or repeated", .job + 1)]
    NotAPermutation { position: usize, job: usize },
}

/// A validated tool switching instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    num_tools: usize,
    capacity: usize,
    required: Vec<ToolSet>,
    sum_required: usize,
}

impl Instance {
    /// Validates and wraps the given per-job tool sets. This is the only way
    /// to obtain an `Instance`, so holding one certifies every invariant.
    ///
    /// All sets must already live in the `num_tools` universe (that is
    /// enforced by `ToolSet` construction, hence no `BadToolIndex` here).
    pub fn new(
        num_tools: usize,
        capacity: usize,
        required: Vec<ToolSet>,
    ) -> Result<Self, ModelError> {
        if required.is_empty() {
            return Err(ModelError::NoJobs);
        }
        if capacity >= num_tools {
            return Err(ModelError::CapacityNotBelowToolCount {
                capacity,
                num_tools,
            });
        }
        let mut sum_required = 0;
        for (job, tools) in required.iter().enumerate() {
            assert_eq!(
                tools.universe(),
                num_tools,
                "job {job}: tool set universe does not match the instance"
            );
            let size = tools.len();
            if size == 0 {
                return Err(ModelError::EmptyJob { job });
            }
            if size > capacity {
                return Err(ModelError::JobTooLarge {
                    job,
                    size,
                    capacity,
                });
            }
            sum_required += size;
        }
        Ok(Instance {
            num_tools,
            capacity,
            required,
            sum_required,
        })
    }

    /// Builds an instance from raw 0-based tool index lists, checking index
    /// bounds before constructing the sets. Duplicate indices within a job
    /// collapse into the set.
    pub fn from_tool_lists(
        num_tools: usize,
        capacity: usize,
        lists: &[Vec<usize>],
    ) -> Result<Self, ModelError> {
        let mut required = Vec::with_capacity(lists.len());
        for (job, list) in lists.iter().enumerate() {
            let mut set = ToolSet::empty(num_tools);
            for &tool in list {
                if tool >= num_tools {
                    return Err(ModelError::BadToolIndex {
                        job,
                        tool,
                        num_tools,
                    });
                }
                set.insert(tool);
            }
            required.push(set);
        }
        Self::new(num_tools, capacity, required)
    }

    pub fn num_jobs(&self) -> usize {
        self.required.len()
    }

    pub fn num_tools(&self) -> usize {
        self.num_tools
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// `Σ|T_i|` over all jobs; the pipe-count identity converts this into
    /// switches.
    pub fn sum_required(&self) -> usize {
        self.sum_required
    }

    /// Tools required by `job`.
    pub fn tools(&self, job: usize) -> &ToolSet {
        &self.required[job]
    }

    /// All per-job tool sets in natural job order.
    pub fn jobs(&self) -> &[ToolSet] {
        &self.required
    }
}

/// A permutation of the jobs: `order[k]` is the job processed at instant `k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JobSequence {
    order: Vec<usize>,
}

impl JobSequence {
    /// Wraps `order` after checking it is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self, ModelError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for (position, &job) in order.iter().enumerate() {
            if job >= n || seen[job] {
                return Err(ModelError::NotAPermutation { position, job });
            }
            seen[job] = true;
        }
        Ok(JobSequence { order })
    }

    pub fn identity(n: usize) -> Self {
        JobSequence {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// Position of each job: `inverse()[job] = instant`.
    pub fn inverse(&self) -> JobSequence {
        let mut inv = vec![0; self.order.len()];
        for (position, &job) in self.order.iter().enumerate() {
            inv[job] = position;
        }
        JobSequence { order: inv }
    }

    /// Swaps the jobs at two instants. Permutations are closed under swaps,
    /// so the invariant survives; this is the solver's move primitive.
    pub fn swap(&mut self, a: usize, b: usize) {
        self.order.swap(a, b);
    }

    /// Removes the job at `from` and reinserts it at `to`, shifting the
    /// block in between (the insertion neighborhood move).
    pub fn shift(&mut self, from: usize, to: usize) {
        if from < to {
            self.order[from..=to].rotate_left(1);
        } else {
            self.order[to..=from].rotate_right(1);
        }
    }
}

/// Renders 1-based, comma-separated, as sequences appear in files and
/// reports.
impl std::fmt::Display for JobSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, job) in self.order.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", job + 1)?;
        }
        Ok(())
    }
}

/// The instance reindexed by a sequence: element `k` is `T_{order[k]}`,
/// borrowed rather than copied. Evaluators only ever see identity order
/// through this view.
#[derive(Clone, Copy, Debug)]
pub struct SequenceView<'a> {
    inst: &'a Instance,
    order: &'a [usize],
}

/// Pairs an instance with a sequence, rejecting length mismatches.
pub fn sequence_view<'a>(
    inst: &'a Instance,
    seq: &'a JobSequence,
) -> Result<SequenceView<'a>, ModelError> {
    if seq.len() != inst.num_jobs() {
        return Err(ModelError::LengthMismatch {
            expected: inst.num_jobs(),
            actual: seq.len(),
        });
    }
    Ok(SequenceView {
        inst,
        order: seq.as_slice(),
    })
}

impl<'a> SequenceView<'a> {
    /// Tools required at instant `k`, i.e. by the `k`-th job of the order.
    pub fn tools(&self, k: usize) -> &'a ToolSet {
        self.inst.tools(self.order[k])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.inst.capacity()
    }

    pub fn num_tools(&self) -> usize {
        self.inst.num_tools()
    }

    pub fn sum_required(&self) -> usize {
        self.inst.sum_required()
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }
}

/// Magazine contents per instant, as produced by a trace evaluator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MagazineTrace {
    pub(crate) states: Vec<ToolSet>,
    pub(crate) full_capacity: bool,
}

impl MagazineTrace {
    /// Magazine state `M_k` for every instant `k`.
    pub fn states(&self) -> &[ToolSet] {
        &self.states
    }

    /// True when every state holds exactly `capacity` tools (keep-soonest
    /// traces). Pipe-construction traces leave unused slots empty instead.
    pub fn full_capacity(&self) -> bool {
        self.full_capacity
    }
}

/// A tool kept loaded from instant `start` to instant `end` although no job
/// in between needs it. Its capacity is the number of interior instants
/// whose magazines it occupies.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Pipe {
    pub start: usize,
    pub end: usize,
    pub tool: usize,
}

impl Pipe {
    pub fn new(start: usize, end: usize, tool: usize) -> Self {
        debug_assert!(start < end);
        Pipe { start, end, tool }
    }

    /// Interior length `end - start - 1`; zero for adjacent instants.
    pub fn capacity(&self) -> usize {
        self.end - self.start - 1
    }
}

/// Outcome of one evaluation. `pipes_count` is populated by the
/// pipe-construction evaluators only; when present and `n ≥ 2`,
/// `switches = sum_required - capacity - pipes_count`, except that
/// `switches` is 0 whenever the magazine holds every tool the schedule
/// uses (the identity would go negative there).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EvalResult {
    pub switches: usize,
    pub pipes_count: Option<usize>,
    pub sum_required: usize,
}
