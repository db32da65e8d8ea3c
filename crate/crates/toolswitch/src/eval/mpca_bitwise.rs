//! Pipe-construction evaluation with range pruning, the fastest evaluator.
//!
//! Two observations cut the quadratic pair scan of [`super::mpca_evaluate`]
//! down to short walks:
//!
//! 1. Once some instant at or before `end - 1` has no free slot, no pipe can
//!    reach from anywhere at or before that instant to `end`. Tracking the
//!    latest known-full instant (`full_upto`) bounds every backward walk.
//! 2. Every candidate start for `end` requires a tool of `T_end`, so the
//!    union of required tools over `full_upto..end` (one sparse-table query,
//!    see [`super::RangeUnionTable`]) prunes ends with nothing to build and
//!    stops the walk early once every such tool has been encountered. Short
//!    windows are unioned directly from the job sets (and a single-instant
//!    window reduces to counting adjacent pipes outright); the table is
//!    built lazily the first time a window grows past that, so schedules
//!    whose magazines run full never pay for it.
//!
//! The walk for a given `end` therefore executes at most one iteration per
//! instant of the longest pipe it could still build; over the whole run the
//! inner iteration count stays within `n * (l + 1)` where `l` is the longest
//! built pipe span, which the differential suite asserts via
//! [`super::MpcaBitwiseStats`]. Pipe and switch counts agree with the plain
//! variant on every input; only the visiting order of equal-count choices
//! differs.

use super::{switches_from_max_pipes, MpcaBitwiseStats, Scratch};
use crate::model::{sequence_view, EvalResult, Instance, JobSequence, ModelError};

/// Window length up to which the union over `full_upto..end` is cheaper to
/// compute directly than through the sparse table; the table is only built
/// (once per evaluation) when some window outgrows this.
const DIRECT_UNION_WINDOW: usize = 8;

/// Number of switches for `sequence` on `instance` by pruned pipe
/// construction. Instrumentation for the run is left in
/// [`Scratch::mpca_bitwise_stats`].
// The fill loop needs its index (filled instants move `full_upto`), and the
// indexed form benchmarked faster than a slice iterator under the dev
// profile; keep the shape the timing suite validated.
#[allow(clippy::needless_range_loop)]
pub fn mpca_bitwise_evaluate(
    instance: &Instance,
    sequence: &JobSequence,
    scratch: &mut Scratch,
) -> Result<EvalResult, ModelError> {
    let view = sequence_view(instance, sequence)?;
    let n = view.len();
    let capacity = view.capacity();
    let sum_required = view.sum_required();
    scratch.stats = MpcaBitwiseStats::default();
    if n == 1 {
        return Ok(EvalResult {
            switches: 0,
            pipes_count: Some(0),
            sum_required,
        });
    }
    scratch.ensure_tools(view.num_tools());
    let Scratch {
        table,
        end_tools,
        window_union,
        cands,
        empty,
        stats,
        ..
    } = scratch;
    let mut table_ready = false;
    empty.clear();
    empty.extend((0..n).map(|i| (capacity - view.tools(i).len()) as u32));

    // Latest instant known to have zero free slots. Instant 0 is a safe
    // floor: pipes ending there do not exist. The update below keeps the
    // invariant that every full instant before the current `end` is at most
    // `full_upto`, because slots only ever fill up (never free), instants
    // filled by this run are recorded on the spot, and instants that start
    // out full are caught by the `end - 1` check when the walk first passes
    // them.
    let mut full_upto = 0usize;
    let mut pipes_count = 0usize;
    let mut inner_iterations = 0usize;
    let mut max_pipe_span = 0usize;
    // `window_union` caches the union over `union_from..=covered_to`; while
    // `full_upto` sits still the window only grows one instant at a time,
    // so most ends extend it with a single set union.
    let mut union_from = usize::MAX;
    let mut covered_to = 0usize;

    for end in 1..n {
        let end_set = view.tools(end);
        let prev_set = view.tools(end - 1);
        if empty[end - 1] == 0 {
            full_upto = end - 1;
        }
        if full_upto == end - 1 {
            // The walk could only visit `end - 1`, so the window union is
            // that instant's tools verbatim: take the adjacent pipes
            // directly. They occupy no interior and always fit.
            let buildable = prev_set.intersection_len(end_set);
            if buildable > 0 {
                inner_iterations += 1;
                pipes_count += buildable;
                max_pipe_span = max_pipe_span.max(1);
            }
            continue;
        }
        if union_from == full_upto && covered_to == end - 2 {
            window_union.union_with(prev_set);
        } else if end - full_upto <= DIRECT_UNION_WINDOW {
            window_union.copy_from(view.tools(full_upto));
            for i in full_upto + 1..end {
                window_union.union_with(view.tools(i));
            }
        } else {
            if !table_ready {
                table.rebuild(&view);
                table_ready = true;
            }
            table.query_unchecked(full_upto, end - 1, window_union);
        }
        union_from = full_upto;
        covered_to = end - 1;
        if !end_tools.assign_intersection(window_union, end_set) {
            continue;
        }
        // First stop of the walk, `start = end - 1`: these pipes are
        // adjacent, so they occupy no interior instant and always fit.
        inner_iterations += 1;
        if cands.assign_intersection(prev_set, end_tools) {
            end_tools.subtract(cands);
            pipes_count += cands.len();
            max_pipe_span = max_pipe_span.max(1);
            if end_tools.is_empty() {
                continue;
            }
        }
        // Free slots at the scarcest interior instant of the span walked
        // so far, maintained as instants enter the interior.
        let mut min_empty = usize::MAX;
        for start in (0..end - 1).rev() {
            if full_upto > start {
                break;
            }
            inner_iterations += 1;
            min_empty = min_empty.min(empty[start + 1] as usize);
            if !cands.assign_intersection(view.tools(start), end_tools) {
                continue;
            }
            // Each qualifying tool is consumed whether or not a slot is
            // found for it: a tool required at `start` can never pipe
            // from anywhere earlier, so later iterations may ignore it.
            end_tools.subtract(cands);
            let buildable = cands.len().min(min_empty);
            debug_assert!(
                buildable > 0,
                "walk never enters a region with a full instant"
            );
            pipes_count += buildable;
            max_pipe_span = max_pipe_span.max(end - start);
            min_empty -= buildable;
            for i in start + 1..end {
                empty[i] -= buildable as u32;
                if empty[i] == 0 {
                    full_upto = i;
                }
            }
            if end_tools.is_empty() {
                break;
            }
        }
    }
    stats.inner_iterations = inner_iterations;
    stats.max_pipe_span = max_pipe_span;
    let switches = switches_from_max_pipes(pipes_count, sum_required, capacity);
    Ok(EvalResult {
        switches,
        pipes_count: Some(pipes_count),
        sum_required,
    })
}
