//! Keep-tool-needed-soonest evaluation, textbook form.
//!
//! Simulates the magazine instant by instant: load what the job requires,
//! and when the magazine overflows evict the loaded tool whose next use
//! lies farthest in the future. Under a fixed job order this eviction rule
//! is optimal, so the switch count is the sequence's true objective value.

use super::{Scratch, ToolSet};
use crate::model::{
    sequence_view, EvalResult, Instance, JobSequence, MagazineTrace, ModelError, SequenceView,
};

/// Number of switches for `sequence` on `instance` under the keep-soonest
/// policy. The initial load is free.
pub fn ktns_evaluate(
    instance: &Instance,
    sequence: &JobSequence,
    scratch: &mut Scratch,
) -> Result<EvalResult, ModelError> {
    let view = sequence_view(instance, sequence)?;
    let switches = simulate(&view, scratch, None);
    Ok(EvalResult {
        switches,
        pipes_count: None,
        sum_required: view.sum_required(),
    })
}

/// Like [`ktns_evaluate`], but also records the full magazine state at every
/// instant. Every recorded state holds exactly `capacity` tools.
pub fn ktns_trace(
    instance: &Instance,
    sequence: &JobSequence,
    scratch: &mut Scratch,
) -> Result<(EvalResult, MagazineTrace), ModelError> {
    let view = sequence_view(instance, sequence)?;
    let mut states = Vec::with_capacity(view.len());
    let switches = simulate(&view, scratch, Some(&mut states));
    let result = EvalResult {
        switches,
        pipes_count: None,
        sum_required: view.sum_required(),
    };
    Ok((
        result,
        MagazineTrace {
            states,
            full_capacity: true,
        },
    ))
}

/// Core simulation. Ties, both in topping up the initial magazine and in
/// picking an eviction victim, break toward the smallest tool index so that
/// traces are reproducible.
fn simulate(
    view: &SequenceView<'_>,
    scratch: &mut Scratch,
    mut states: Option<&mut Vec<ToolSet>>,
) -> usize {
    let n = view.len();
    let m = view.num_tools();
    let capacity = view.capacity();
    scratch.next_needed.rebuild(view);
    let next = &scratch.next_needed;
    let mag = &mut scratch.mag_flags;
    mag.clear();
    mag.resize(m, false);

    // Instant 0: the required tools, topped up to a full magazine with the
    // soonest-needed of the rest. The top-up never costs a switch but keeps
    // traces at exactly `capacity` tools, which the later instants rely on.
    for tool in view.tools(0).iter() {
        mag[tool] = true;
    }
    for _ in view.tools(0).len()..capacity {
        let mut pick = usize::MAX;
        for (tool, &loaded) in mag.iter().enumerate() {
            if !loaded && (pick == usize::MAX || next.at(tool, 0) < next.at(pick, 0)) {
                pick = tool;
            }
        }
        mag[pick] = true;
    }
    if let Some(out) = states.as_deref_mut() {
        out.push(collect(mag, m));
    }

    let mut switches = 0;
    for instant in 1..n {
        let mut inserted = 0;
        for tool in view.tools(instant).iter() {
            if !mag[tool] {
                mag[tool] = true;
                inserted += 1;
            }
        }
        switches += inserted;
        // One eviction per insertion restores the magazine to capacity.
        // A victim always exists: the magazine briefly holds more than
        // `capacity >= |T_instant|` tools, so some loaded tool is not
        // required right now (its next use is strictly later).
        for _ in 0..inserted {
            let mut victim = usize::MAX;
            for (tool, &loaded) in mag.iter().enumerate() {
                if loaded
                    && next.at(tool, instant) > instant as u32
                    && (victim == usize::MAX || next.at(tool, instant) > next.at(victim, instant))
                {
                    victim = tool;
                }
            }
            mag[victim] = false;
        }
        if let Some(out) = states.as_deref_mut() {
            out.push(collect(mag, m));
        }
    }
    switches
}

fn collect(mag: &[bool], m: usize) -> ToolSet {
    let mut set = ToolSet::empty(m);
    for (tool, &loaded) in mag.iter().enumerate() {
        if loaded {
            set.insert(tool);
        }
    }
    set
}
