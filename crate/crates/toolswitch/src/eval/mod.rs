//! The four tool-loading evaluators.
//!
//! All compute the same objective, the minimum number of switches for a
//! fixed job order, and differ only in mechanics and speed:
//!
//! | evaluator                   | approach                            | work per evaluation          |
//! |-----------------------------|-------------------------------------|------------------------------|
//! | [`ktns_evaluate`]           | keep-soonest policy, per-tool scans | `O(m·n)` matrix + evictions  |
//! | [`ktns_bitwise_evaluate`]   | keep-soonest policy, block ops      | short forward walks per instant |
//! | [`mpca_evaluate`]           | pipe construction over job pairs    | `O(n²)` set ops, early break |
//! | [`mpca_bitwise_evaluate`]   | pipe construction, pruned           | `O(l·⌈m/64⌉·n + n·log n)`    |
//!
//! The pipe-construction pair counts how many tools can be kept loaded
//! across gaps between uses (pipes) and converts that maximum through
//! [`pipes_to_switches`], falling back to zero when the magazine is roomy
//! enough to hold every tool the schedule uses (see
//! `switches_from_max_pipes`); the keep-soonest pair simulates the magazine
//! directly. Exact agreement of all four on every valid input is a tested
//! invariant, not an implementation accident.
//!
//! Evaluators are pure functions of `(instance, sequence)` plus a caller
//! owned [`Scratch`] that recycles working buffers between calls. Scratches
//! are cheap to create, must not be shared by two in-flight evaluations
//! (enforced by `&mut`), and may be dropped at any time.

mod ktns;
mod ktns_bitwise;
mod mpca;
mod mpca_bitwise;
mod next_needed;
mod range_union;

pub use ktns::{ktns_evaluate, ktns_trace};
pub use ktns_bitwise::ktns_bitwise_evaluate;
pub use mpca::{mpca_evaluate, mpca_trace};
pub use mpca_bitwise::mpca_bitwise_evaluate;
pub use next_needed::{next_needed_matrix, NextNeededMatrix};
pub use range_union::{range_union_table, RangeUnionTable};

use crate::model::{EvalResult, Instance, JobSequence, ModelError};
use crate::toolset::ToolSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("range union query [{lo}, {hi}] outside the {len}-instant view")]
    BadRange { lo: usize, hi: usize, len: usize },
    #[error("{pipes_count} pipes cannot fit in the slack {sum_required} - {capacity}")]
    NegativeResult {
        pipes_count: usize,
        sum_required: usize,
        capacity: usize,
    },
}

/// The switch-count identity: `sum_required - capacity - pipes_count`.
///
/// Only meaningful for instances with at least two jobs. The difference goes
/// negative when the magazine holds more slots than the schedule has distinct
/// tools (see `switches_from_max_pipes`), or when the supplied pipe set was
/// overcounted.
pub fn pipes_to_switches(
    pipes_count: usize,
    sum_required: usize,
    capacity: usize,
) -> Result<usize, EvalError> {
    sum_required
        .checked_sub(capacity + pipes_count)
        .ok_or(EvalError::NegativeResult {
            pipes_count,
            sum_required,
            capacity,
        })
}

/// Switch count from a *maximum* pipe construction, covering the one case
/// the raw identity cannot express.
///
/// The identity presumes a scarce magazine. Once capacity reaches the number
/// of distinct tools the whole schedule uses, a maximum construction pipes
/// every consecutive reuse of every tool, `pipes_count` becomes
/// `sum_required` minus the distinct-tool count, and the identity value
/// drops below zero; the honest answer there is zero, because everything
/// fits at once and nothing is ever evicted. Since no valid pipe set can
/// exceed `sum_required` minus the distinct-tool count, a negative identity
/// value arises *only* in that regime, so mapping it to zero is exact.
pub(crate) fn switches_from_max_pipes(
    pipes_count: usize,
    sum_required: usize,
    capacity: usize,
) -> usize {
    pipes_to_switches(pipes_count, sum_required, capacity).unwrap_or(0)
}

/// Selects one of the four evaluators at runtime (CLI flags, solver config,
/// benchmark cells).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EvaluatorKind {
    Ktns,
    KtnsBitwise,
    Mpca,
    MpcaBitwise,
}

impl EvaluatorKind {
    pub const ALL: [EvaluatorKind; 4] = [
        EvaluatorKind::Ktns,
        EvaluatorKind::KtnsBitwise,
        EvaluatorKind::Mpca,
        EvaluatorKind::MpcaBitwise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvaluatorKind::Ktns => "ktns",
            EvaluatorKind::KtnsBitwise => "ktns-bitwise",
            EvaluatorKind::Mpca => "mpca",
            EvaluatorKind::MpcaBitwise => "mpca-bitwise",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn evaluate(
        self,
        inst: &Instance,
        seq: &JobSequence,
        scratch: &mut Scratch,
    ) -> Result<EvalResult, ModelError> {
        match self {
            EvaluatorKind::Ktns => ktns_evaluate(inst, seq, scratch),
            EvaluatorKind::KtnsBitwise => ktns_bitwise_evaluate(inst, seq, scratch),
            EvaluatorKind::Mpca => mpca_evaluate(inst, seq, scratch),
            EvaluatorKind::MpcaBitwise => mpca_bitwise_evaluate(inst, seq, scratch),
        }
    }
}

impl std::fmt::Display for EvaluatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Instrumentation from the last pruned pipe-construction run: how many
/// inner-loop iterations executed and the longest `end - start` span among
/// built pipes. The tested runtime bound is
/// `inner_iterations <= n * (max_pipe_span + 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MpcaBitwiseStats {
    pub inner_iterations: usize,
    pub max_pipe_span: usize,
}

/// Reusable working buffers shared by the evaluators. Contents between
/// calls are unspecified; every evaluator re-derives what it needs.
#[derive(Debug)]
pub struct Scratch {
    next_needed: NextNeededMatrix,
    table: RangeUnionTable,
    mag: ToolSet,
    mag_prev: ToolSet,
    cands: ToolSet,
    chosen: ToolSet,
    interior_union: ToolSet,
    end_tools: ToolSet,
    window_union: ToolSet,
    all_tools: ToolSet,
    mag_flags: Vec<bool>,
    occupancy: Vec<u32>,
    empty: Vec<u32>,
    stats: MpcaBitwiseStats,
}

impl Scratch {
    pub fn new() -> Self {
        Scratch {
            next_needed: NextNeededMatrix::new(),
            table: RangeUnionTable::new(),
            mag: ToolSet::empty(0),
            mag_prev: ToolSet::empty(0),
            cands: ToolSet::empty(0),
            chosen: ToolSet::empty(0),
            interior_union: ToolSet::empty(0),
            end_tools: ToolSet::empty(0),
            window_union: ToolSet::empty(0),
            all_tools: ToolSet::empty(0),
            mag_flags: Vec::new(),
            occupancy: Vec::new(),
            empty: Vec::new(),
            stats: MpcaBitwiseStats::default(),
        }
    }

    /// Counters from the most recent [`mpca_bitwise_evaluate`] call on this
    /// scratch.
    pub fn mpca_bitwise_stats(&self) -> MpcaBitwiseStats {
        self.stats
    }

    /// Re-targets the set buffers at a `num_tools`-sized universe.
    fn ensure_tools(&mut self, num_tools: usize) {
        if self.mag.universe() != num_tools {
            self.mag = ToolSet::empty(num_tools);
            self.mag_prev = ToolSet::empty(num_tools);
            self.cands = ToolSet::empty(num_tools);
            self.chosen = ToolSet::empty(num_tools);
            self.interior_union = ToolSet::empty(num_tools);
            self.end_tools = ToolSet::empty(num_tools);
            self.window_union = ToolSet::empty(num_tools);
            self.all_tools = ToolSet::full(num_tools);
        }
    }
}

impl Default for Scratch {
    fn default() -> Self {
        Self::new()
    }
}
