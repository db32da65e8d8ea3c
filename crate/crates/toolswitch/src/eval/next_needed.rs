//! Next-needed matrix: for every tool and instant, the earliest instant at
//! or after it where that tool is required. This is the lookahead structure
//! behind the keep-soonest eviction rule.

use crate::model::SequenceView;

/// Dense `n x m` lookup `at(tool, instant)` answering "when is this tool
/// next required, counting the instant itself?". Instants past the end are
/// reported as [`NextNeededMatrix::sentinel`], which compares greater than
/// every real instant.
///
/// The matrix is rebuilt per evaluation in one backward sweep, `O(n·m)`
/// time over a buffer that is reused across rebuilds.
#[derive(Debug)]
pub struct NextNeededMatrix {
    num_instants: usize,
    num_tools: usize,
    /// Row-major by instant: `data[instant * num_tools + tool]`.
    data: Vec<u32>,
    /// Sweep state: next requirement seen so far for each tool.
    upcoming: Vec<u32>,
}

impl NextNeededMatrix {
    pub fn new() -> Self {
        NextNeededMatrix {
            num_instants: 0,
            num_tools: 0,
            data: Vec::new(),
            upcoming: Vec::new(),
        }
    }

    pub fn from_view(view: &SequenceView<'_>) -> Self {
        let mut matrix = Self::new();
        matrix.rebuild(view);
        matrix
    }

    /// Recomputes the matrix for a sequenced instance, reusing storage.
    pub fn rebuild(&mut self, view: &SequenceView<'_>) {
        let n = view.len();
        let m = view.num_tools();
        self.num_instants = n;
        self.num_tools = m;
        let sentinel = n as u32;
        self.data.clear();
        self.data.resize(n * m, 0);
        self.upcoming.clear();
        self.upcoming.resize(m, sentinel);
        for instant in (0..n).rev() {
            for tool in view.tools(instant).iter() {
                self.upcoming[tool] = instant as u32;
            }
            self.data[instant * m..(instant + 1) * m].copy_from_slice(&self.upcoming);
        }
    }

    /// Earliest instant `>= instant` requiring `tool`, or [`Self::sentinel`].
    #[inline]
    pub fn at(&self, tool: usize, instant: usize) -> u32 {
        debug_assert!(tool < self.num_tools && instant < self.num_instants);
        self.data[instant * self.num_tools + tool]
    }

    /// The "never again" marker: one past the last instant.
    #[inline]
    pub fn sentinel(&self) -> u32 {
        self.num_instants as u32
    }

    pub fn num_instants(&self) -> usize {
        self.num_instants
    }

    pub fn num_tools(&self) -> usize {
        self.num_tools
    }
}

impl Default for NextNeededMatrix {
    fn default() -> Self {
        Self::new()
    }
}

/// Builds the matrix for `sequence` applied to `instance`; convenience
/// wrapper over [`NextNeededMatrix::from_view`].
pub fn next_needed_matrix(view: &SequenceView<'_>) -> NextNeededMatrix {
    NextNeededMatrix::from_view(view)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sample6, sample6_optimal_order};
    use crate::model::{sequence_view, JobSequence};

    #[test]
    fn identity_order_lookups() {
        let inst = sample6();
        let seq = JobSequence::identity(6);
        let view = sequence_view(&inst, &seq).unwrap();
        let a = next_needed_matrix(&view);
        assert_eq!(a.sentinel(), 6);
        // Tool 6 is required at instants 2, 3, 4 and never after.
        assert_eq!(a.at(6, 0), 2);
        assert_eq!(a.at(6, 2), 2);
        assert_eq!(a.at(6, 3), 3);
        assert_eq!(a.at(6, 5), 6);
        // Tool 5 only at the first and last instants.
        assert_eq!(a.at(5, 0), 0);
        assert_eq!(a.at(5, 1), 5);
        // Tool 1 next needed from instant 4 onward: instant 5.
        assert_eq!(a.at(1, 4), 5);
    }

    #[test]
    fn reorder_changes_rows() {
        let inst = sample6();
        let seq = sample6_optimal_order();
        let view = sequence_view(&inst, &seq).unwrap();
        let a = next_needed_matrix(&view);
        // Tool 4 is pulled forward: its three users now run consecutively
        // at instants 0..=2, so from instant 3 it is never needed again.
        assert_eq!(a.at(4, 0), 0);
        assert_eq!(a.at(4, 2), 2);
        assert_eq!(a.at(4, 3), 6);
    }

    #[test]
    fn every_entry_is_the_true_minimum() {
        let inst = sample6();
        let seq = sample6_optimal_order();
        let view = sequence_view(&inst, &seq).unwrap();
        let a = next_needed_matrix(&view);
        for tool in 0..view.num_tools() {
            for instant in 0..view.len() {
                let expect = (instant..view.len())
                    .find(|&j| view.tools(j).contains(tool))
                    .map_or(a.sentinel(), |j| j as u32);
                assert_eq!(a.at(tool, instant), expect, "tool {tool} instant {instant}");
            }
        }
    }

    #[test]
    fn rebuild_shrinks_and_grows() {
        let inst = sample6();
        let seq = JobSequence::identity(6);
        let view = sequence_view(&inst, &seq).unwrap();
        let mut a = NextNeededMatrix::new();
        a.rebuild(&view);
        assert_eq!((a.num_instants(), a.num_tools()), (6, 7));
        let small = crate::model::Instance::from_tool_lists(2, 1, &[vec![0], vec![1]]).unwrap();
        let small_seq = JobSequence::identity(2);
        let small_view = sequence_view(&small, &small_seq).unwrap();
        a.rebuild(&small_view);
        assert_eq!((a.num_instants(), a.num_tools()), (2, 2));
        assert_eq!(a.at(1, 0), 1);
        assert_eq!(a.at(0, 1), 2);
    }
}
