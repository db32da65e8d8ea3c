//! Slow, independent ground truths the evaluators are tested against.
//!
//! Nothing here is shared with the evaluator implementations: the dynamic
//! program enumerates magazine states outright, the exhaustive search tries
//! every permutation, and the arc counter recomputes switches from a trace
//! by a different formula. Each is written to be obviously correct rather
//! than fast, and the tiny-instance suites assert exact agreement.

use crate::model::{sequence_view, Instance, JobSequence, MagazineTrace, ModelError, Pipe};
use thiserror::Error;

/// Default cap on `choose(m, C) * n`, the number of layer states the dynamic
/// program may touch.
pub const DEFAULT_STATE_BUDGET: u128 = 10_000_000;

/// Hard cap for exhaustive sequencing (`n!` evaluations).
pub const EXHAUSTIVE_MAX_JOBS: usize = 10;

/// Tool-universe cap for the dynamic program's bit-mask states.
pub const DP_MAX_TOOLS: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("dynamic program needs {states} states, over the budget {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
    #[error("dynamic program supports at most {max} tools, instance has {num_tools}")]
    UniverseTooLarge { num_tools: usize, max: usize },
    #[error("exhaustive search supports at most {max} jobs, instance has {n}")]
    TooManyJobs { n: usize, max: usize },
    #[error("trace state {instant} holds {len} tools, not the full capacity {capacity}")]
    NotFullCapacity {
        instant: usize,
        len: usize,
        capacity: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One broken fact about a claimed pipe set, with enough coordinates to
/// reproduce it. Indices are 0-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipeViolation {
    #[error("pipe {index} reaches instant {end}, past the last instant {last}")]
    EndPastTrace {
        index: usize,
        end: usize,
        last: usize,
    },
    #[error("pipe {index} names tool {tool}, outside the {num_tools}-tool universe")]
    ToolOutOfRange {
        index: usize,
        tool: usize,
        num_tools: usize,
    },
    #[error("pipe {index} tool {tool} is not required at its endpoint instant {instant}")]
    EndpointNotRequired {
        index: usize,
        tool: usize,
        instant: usize,
    },
    #[error("pipe {index} tool {tool} is required at interior instant {instant}")]
    RequiredInside {
        index: usize,
        tool: usize,
        instant: usize,
    },
    #[error("pipe {index} tool {tool} is missing from the magazine at interior instant {instant}")]
    AbsentFromMagazine {
        index: usize,
        tool: usize,
        instant: usize,
    },
    #[error("instant {instant} requires tool {tool} but the magazine does not hold it")]
    RequiredToolMissing { instant: usize, tool: usize },
    #[error("magazine at instant {instant} holds {occupancy} tools, over capacity {capacity}")]
    OverCapacity {
        instant: usize,
        occupancy: usize,
        capacity: usize,
    },
    #[error("pipes {first:?} and {second:?} overlap on tool {tool}")]
    Overlap {
        tool: usize,
        first: Pipe,
        second: Pipe,
    },
}

fn mask_of(tools: &crate::ToolSet) -> u128 {
    let mut m = 0u128;
    for t in tools.iter() {
        m |= 1 << t;
    }
    m
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Appends every `capacity`-subset of `0..m` that contains `req`.
fn push_layer_states(req: u128, m: usize, capacity: usize, out: &mut Vec<u128>) {
    let free: Vec<usize> = (0..m).filter(|&t| req >> t & 1 == 0).collect();
    let k = capacity - req.count_ones() as usize;
    if k == 0 {
        out.push(req);
        return;
    }
    // Lexicographic combinations over the free tools.
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut mask = req;
        for &p in &pick {
            mask |= 1 << free[p];
        }
        out.push(mask);
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pick[i] != free.len() - (k - i) {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Exact minimum switch count for a fixed order, by layered shortest path
/// over all full magazines: layer `k` holds every `C`-subset containing the
/// instant's required tools, an edge costs the tools swapped in. Uses the
/// default state budget.
pub fn tlp_dp_optimal(inst: &Instance, seq: &JobSequence) -> Result<usize, OracleError> {
    tlp_dp_optimal_with_budget(inst, seq, DEFAULT_STATE_BUDGET)
}

/// As [`tlp_dp_optimal`], with an explicit `choose(m, C) * n` budget.
pub fn tlp_dp_optimal_with_budget(
    inst: &Instance,
    seq: &JobSequence,
    budget: u128,
) -> Result<usize, OracleError> {
    let view = sequence_view(inst, seq)?;
    let (n, m, capacity) = (view.len(), view.num_tools(), view.capacity());
    if m > DP_MAX_TOOLS {
        return Err(OracleError::UniverseTooLarge {
            num_tools: m,
            max: DP_MAX_TOOLS,
        });
    }
    let states = binomial(m, capacity) * n as u128;
    if states > budget {
        return Err(OracleError::BudgetExceeded { states, budget });
    }

    let mut prev_states = Vec::new();
    let mut prev_cost: Vec<usize> = Vec::new();
    let mut cur_states = Vec::new();
    push_layer_states(mask_of(view.tools(0)), m, capacity, &mut prev_states);
    prev_cost.resize(prev_states.len(), 0);

    for k in 1..n {
        cur_states.clear();
        push_layer_states(mask_of(view.tools(k)), m, capacity, &mut cur_states);
        let cur_cost: Vec<usize> = cur_states
            .iter()
            .map(|&next| {
                prev_states
                    .iter()
                    .zip(&prev_cost)
                    .map(|(&prev, &c)| c + capacity - (prev & next).count_ones() as usize)
                    .min()
                    .expect("layers are never empty")
            })
            .collect();
        std::mem::swap(&mut prev_states, &mut cur_states);
        prev_cost = cur_cost;
    }
    Ok(prev_cost.into_iter().min().expect("layers are never empty"))
}

/// Advances `perm` to its lexicographic successor; false once `perm` is the
/// last (descending) permutation.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Tries every permutation of the jobs and returns the best sequence under
/// `evaluate`, ties resolved toward the lexicographically smallest order.
pub fn jesp_exhaustive<F>(
    inst: &Instance,
    mut evaluate: F,
) -> Result<(JobSequence, usize), OracleError>
where
    F: FnMut(&Instance, &JobSequence) -> usize,
{
    let n = inst.num_jobs();
    if n > EXHAUSTIVE_MAX_JOBS {
        return Err(OracleError::TooManyJobs {
            n,
            max: EXHAUSTIVE_MAX_JOBS,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(JobSequence, usize)> = None;
    loop {
        let seq = JobSequence::new(perm.clone()).expect("permutations stay permutations");
        let value = evaluate(inst, &seq);
        // Strict improvement keeps the first optimum of the lexicographic
        // enumeration, which is exactly the smallest optimal order.
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((seq, value));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("n >= 1 yields at least one permutation"))
}

/// Recomputes switches from a full-capacity trace by counting kept-tool arcs
/// between consecutive instants: `C*(n-1) - |A|`. The capacity is taken from
/// the first state; every state must match it.
pub fn switches_via_arcs(trace: &MagazineTrace) -> Result<usize, OracleError> {
    let states = trace.states();
    let Some(first) = states.first() else {
        return Ok(0);
    };
    let capacity = first.len();
    for (instant, state) in states.iter().enumerate() {
        if state.len() != capacity {
            return Err(OracleError::NotFullCapacity {
                instant,
                len: state.len(),
                capacity,
            });
        }
    }
    let arcs: usize = states
        .windows(2)
        .map(|w| w[0].intersection_len(&w[1]))
        .sum();
    Ok(capacity * (states.len() - 1) - arcs)
}

/// Checks that a (trace, pipe set) pair is internally consistent: pipes sit
/// on required endpoints, span only instants that do not require their tool,
/// are actually loaded there, never overflow the magazine, and are pairwise
/// arc-disjoint per tool. Returns the first violation in a fixed order:
/// per-pipe checks in list order, then per-instant checks, then per-tool
/// overlap checks.
///
/// Panics if `seq` does not match the instance or the trace length; the
/// inputs come from a trace evaluator, which guarantees the shapes line up.
// Instants are walked by index because the index itself is part of any
// reported violation.
#[allow(clippy::needless_range_loop)]
pub fn validate_pipe_set(
    trace: &MagazineTrace,
    pipes: &[Pipe],
    inst: &Instance,
    seq: &JobSequence,
) -> Result<(), PipeViolation> {
    let view = sequence_view(inst, seq).expect("trace inputs must match the instance");
    let states = trace.states();
    let n = states.len();
    assert_eq!(n, view.len(), "trace must cover every instant");

    for (index, pipe) in pipes.iter().enumerate() {
        if pipe.end >= n {
            return Err(PipeViolation::EndPastTrace {
                index,
                end: pipe.end,
                last: n - 1,
            });
        }
        if pipe.tool >= view.num_tools() {
            return Err(PipeViolation::ToolOutOfRange {
                index,
                tool: pipe.tool,
                num_tools: view.num_tools(),
            });
        }
        for instant in [pipe.start, pipe.end] {
            if !view.tools(instant).contains(pipe.tool) {
                return Err(PipeViolation::EndpointNotRequired {
                    index,
                    tool: pipe.tool,
                    instant,
                });
            }
        }
        for instant in pipe.start + 1..pipe.end {
            if view.tools(instant).contains(pipe.tool) {
                return Err(PipeViolation::RequiredInside {
                    index,
                    tool: pipe.tool,
                    instant,
                });
            }
            if !states[instant].contains(pipe.tool) {
                return Err(PipeViolation::AbsentFromMagazine {
                    index,
                    tool: pipe.tool,
                    instant,
                });
            }
        }
    }

    for (instant, state) in states.iter().enumerate() {
        let mut missing = view.tools(instant).clone();
        missing.subtract(state);
        if let Some(tool) = missing.first() {
            return Err(PipeViolation::RequiredToolMissing { instant, tool });
        }
        if state.len() > view.capacity() {
            return Err(PipeViolation::OverCapacity {
                instant,
                occupancy: state.len(),
                capacity: view.capacity(),
            });
        }
    }

    // Arc-disjointness: for one tool, sort spans by start; consecutive spans
    // may share at most an endpoint.
    let mut by_tool: Vec<(usize, Pipe)> = pipes.iter().map(|p| (p.tool, *p)).collect();
    by_tool.sort_unstable_by_key(|&(tool, p)| (tool, p.start, p.end));
    for w in by_tool.windows(2) {
        let ((t1, a), (t2, b)) = (w[0], w[1]);
        if t1 == t2 && b.start < a.end {
            return Err(PipeViolation::Overlap {
                tool: t1,
                first: a,
                second: b,
            });
        }
    }
    Ok(())
}

/// Brute-force magazine search used to sanity-check the dynamic program in
/// tests: recursively tries every full magazine per instant.
#[cfg(test)]
fn tlp_brute_force(view: &crate::model::SequenceView) -> usize {
    use crate::model::SequenceView;
    fn masks_for(req: u128, m: usize, capacity: usize) -> Vec<u128> {
        let mut out = Vec::new();
        push_layer_states(req, m, capacity, &mut out);
        out
    }
    fn go(view: &SequenceView, k: usize, prev: u128, m: usize, c: usize) -> usize {
        if k == view.len() {
            return 0;
        }
        masks_for(mask_of(view.tools(k)), m, c)
            .into_iter()
            .map(|mask| c - (mask & prev).count_ones() as usize + go(view, k + 1, mask, m, c))
            .min()
            .expect("at least one magazine per instant")
    }
    let (m, c) = (view.num_tools(), view.capacity());
    masks_for(mask_of(view.tools(0)), m, c)
        .into_iter()
        .map(|mask| go(view, 1, mask, m, c))
        .min()
        .expect("at least one magazine per instant")
}
