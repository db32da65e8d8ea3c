//! Keep-tool-needed-soonest evaluation over packed bit sets.
//!
//! Rather than maintaining per-tool lookahead entries, each instant rebuilds
//! the magazine directly: start from the required tools, then walk forward
//! through the upcoming instants and retain, soonest user first, whichever
//! previously loaded tools are about to be needed. The walk stops the moment
//! the magazine is full, which for realistic instances happens after a
//! handful of instants, and every step is a block-wise intersection instead
//! of an `O(m)` scan.
//!
//! When several retained tools are next needed at the same instant, or are
//! never needed again, the lowest tool index wins. That can pick a different
//! victim than [`super::ktns_evaluate`] picks, so intermediate magazines may
//! differ on such ties; the switch total cannot, because every
//! farthest-next-use eviction policy starting from the same initial magazine
//! is optimal for the remaining sequence. The evaluators agreeing on every
//! count is part of the differential test suite.

use super::Scratch;
use crate::model::{sequence_view, EvalResult, Instance, JobSequence, ModelError};

/// Number of switches for `sequence` on `instance` under the keep-soonest
/// policy, computed with block operations. Agrees with [`super::ktns_evaluate`]
/// on every input.
pub fn ktns_bitwise_evaluate(
    instance: &Instance,
    sequence: &JobSequence,
    scratch: &mut Scratch,
) -> Result<EvalResult, ModelError> {
    let view = sequence_view(instance, sequence)?;
    let n = view.len();
    let capacity = view.capacity();
    scratch.ensure_tools(view.num_tools());
    let Scratch {
        mag,
        mag_prev,
        cands,
        all_tools,
        ..
    } = scratch;

    // Initial magazine: the first job's tools, topped up with the soonest
    // needed of everything else (free of charge, like any initial load).
    mag.copy_from(view.tools(0));
    let mut need = capacity - mag.len();
    let mut upcoming = 1;
    while need > 0 && upcoming < n {
        need -= mag.insert_lowest_from(view.tools(upcoming), need);
        upcoming += 1;
    }
    if need > 0 {
        mag.insert_lowest_from(all_tools, need);
    }

    let mut switches = 0;
    for instant in 1..n {
        std::mem::swap(mag, mag_prev);
        mag.copy_from(view.tools(instant));
        switches += mag.len() - mag.intersection_len(mag_prev);
        let mut need = capacity - mag.len();
        let mut upcoming = instant + 1;
        while need > 0 && upcoming < n {
            cands.copy_from(view.tools(upcoming));
            cands.intersect_with(mag_prev);
            need -= mag.insert_lowest_from(cands, need);
            upcoming += 1;
        }
        if need > 0 {
            // Pad with tools that are never required again; keeping the
            // previous load is as good as anything.
            let filled = mag.insert_lowest_from(mag_prev, need);
            debug_assert_eq!(
                filled, need,
                "previous magazine always covers the shortfall"
            );
        }
    }
    Ok(EvalResult {
        switches,
        pipes_count: None,
        sum_required: view.sum_required(),
    })
}
