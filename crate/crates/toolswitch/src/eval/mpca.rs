//! Pipe-construction evaluation.
//!
//! A pipe keeps one tool loaded from one of its uses (`start`) to a later
//! use (`end`) straight through the instants between them, so it saves
//! exactly one switch. A tool qualifies for a `(start, end)` pipe when both
//! endpoint jobs require it and no job in between does; a magazine slot must
//! be free at every interior instant. Zero-length pipes (adjacent instants)
//! occupy nothing and always fit.
//!
//! This evaluator greedily builds, for each `end` from left to right and
//! each `start` walking backward, as many pipes as the scarcest interior
//! instant allows. The greedy choice is safe because a longer pipe passes
//! through strictly more interior instants than any shorter one it could
//! displace. The resulting maximum pipe count converts to the switch total
//! through [`super::switches_from_max_pipes`]; agreement with the
//! keep-soonest simulation on every input is a tested invariant.
//!
//! When several qualifying tools compete for fewer free slots, the lowest
//! tool indices win. Which tools are picked never changes the count, but
//! pinning the rule keeps [`mpca_trace`] reproducible.

use super::{switches_from_max_pipes, Scratch};
use crate::model::{
    sequence_view, EvalResult, Instance, JobSequence, MagazineTrace, ModelError, Pipe, SequenceView,
};
use crate::toolset::ToolSet;

/// Number of switches for `sequence` on `instance` by maximum pipe
/// construction.
pub fn mpca_evaluate(
    instance: &Instance,
    sequence: &JobSequence,
    scratch: &mut Scratch,
) -> Result<EvalResult, ModelError> {
    let view = sequence_view(instance, sequence)?;
    let sum_required = view.sum_required();
    if view.len() == 1 {
        return Ok(EvalResult {
            switches: 0,
            pipes_count: Some(0),
            sum_required,
        });
    }
    let pipes_count = build_pipes(&view, scratch, None);
    let switches = switches_from_max_pipes(pipes_count, sum_required, view.capacity());
    Ok(EvalResult {
        switches,
        pipes_count: Some(pipes_count),
        sum_required,
    })
}

/// Like [`mpca_evaluate`], but also returns the magazine state per instant
/// (required tools plus pipe interiors; instants need not be full) and the
/// constructed pipes themselves.
pub fn mpca_trace(
    instance: &Instance,
    sequence: &JobSequence,
    scratch: &mut Scratch,
) -> Result<(EvalResult, MagazineTrace, Vec<Pipe>), ModelError> {
    let view = sequence_view(instance, sequence)?;
    let sum_required = view.sum_required();
    let mut sink = TraceSink {
        states: (0..view.len()).map(|i| view.tools(i).clone()).collect(),
        pipes: Vec::new(),
    };
    let result = if view.len() == 1 {
        EvalResult {
            switches: 0,
            pipes_count: Some(0),
            sum_required,
        }
    } else {
        let pipes_count = build_pipes(&view, scratch, Some(&mut sink));
        debug_assert_eq!(pipes_count, sink.pipes.len());
        let switches = switches_from_max_pipes(pipes_count, sum_required, view.capacity());
        EvalResult {
            switches,
            pipes_count: Some(pipes_count),
            sum_required,
        }
    };
    let trace = MagazineTrace {
        states: sink.states,
        full_capacity: false,
    };
    Ok((result, trace, sink.pipes))
}

struct TraceSink {
    states: Vec<ToolSet>,
    pipes: Vec<Pipe>,
}

/// Maximum number of constructible pipes. `sink`, when present, receives
/// the chosen pipes and has tools threaded through its interior states.
// Indexed update loops here benchmarked faster than slice iterators under
// the dev profile; keep the shape the timing suite validated.
#[allow(clippy::needless_range_loop)]
fn build_pipes(
    view: &SequenceView<'_>,
    scratch: &mut Scratch,
    mut sink: Option<&mut TraceSink>,
) -> usize {
    let n = view.len();
    let capacity = view.capacity();
    scratch.ensure_tools(view.num_tools());
    let Scratch {
        cands,
        chosen,
        interior_union,
        occupancy,
        ..
    } = scratch;
    occupancy.clear();
    occupancy.extend((0..n).map(|i| view.tools(i).len() as u32));

    let mut pipes_count = 0;
    for end in 1..n {
        // Tools required at an instant between `start` and `end`; such a
        // tool would be unloaded and reloaded anyway, never piped.
        interior_union.clear();
        // Free slots at the scarcest interior instant of the current span.
        // No interior yet, so no cap.
        let mut min_empty = usize::MAX;
        for start in (0..end).rev() {
            if min_empty == 0 {
                break;
            }
            cands.copy_from(view.tools(start));
            cands.intersect_with(view.tools(end));
            cands.subtract(interior_union);
            let buildable = cands.len().min(min_empty);
            if buildable > 0 {
                pipes_count += buildable;
                for i in start + 1..end {
                    occupancy[i] += buildable as u32;
                }
                if start + 1 < end {
                    min_empty -= buildable;
                }
                if let Some(sink) = sink.as_deref_mut() {
                    chosen.clear();
                    chosen.insert_lowest_from(cands, buildable);
                    for tool in chosen.iter() {
                        sink.pipes.push(Pipe::new(start, end, tool));
                        for i in start + 1..end {
                            sink.states[i].insert(tool);
                        }
                    }
                }
            }
            interior_union.union_with(view.tools(start));
            min_empty = min_empty.min(capacity - occupancy[start] as usize);
        }
    }
    if let Some(sink) = sink {
        for (state, &occupied) in sink.states.iter().zip(occupancy.iter()) {
            debug_assert_eq!(state.len() as u32, occupied);
            debug_assert!(state.len() <= capacity);
        }
    }
    pipes_count
}
