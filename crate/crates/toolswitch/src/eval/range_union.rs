//! Sparse table answering "which tools are required anywhere in instants
//! `lo..=hi`?" in constant set-union time after an `O(n log n)` build.
//!
//! Level `k` stores the union over each window of `2^k` consecutive
//! instants; a query unions the two (possibly overlapping) power-of-two
//! windows that cover the range. Overlap is harmless for unions. All
//! windows of all levels live as rows of one flat block buffer, so a
//! rebuild is a single linear pass over memory that stays allocated
//! between evaluations, and a query is two row reads.

use super::EvalError;
use crate::model::SequenceView;
use crate::toolset::{Block, ToolSet, BLOCK_BITS};

#[derive(Debug)]
pub struct RangeUnionTable {
    num_instants: usize,
    universe: usize,
    /// Blocks per row; every row spans the whole tool universe.
    row_blocks: usize,
    /// Row offset of each level's first window. Level `k` row `i` holds the
    /// union of the tool sets for instants `i .. i + 2^k`.
    level_rows: Vec<usize>,
    storage: Vec<Block>,
}

impl RangeUnionTable {
    pub fn new() -> Self {
        RangeUnionTable {
            num_instants: 0,
            universe: 0,
            row_blocks: 0,
            level_rows: Vec::new(),
            storage: Vec::new(),
        }
    }

    pub fn from_view(view: &SequenceView<'_>) -> Self {
        let mut table = Self::new();
        table.rebuild(view);
        table
    }

    /// Recomputes the table for a sequenced instance, reusing the block
    /// storage from earlier rebuilds.
    // The multi-block path indexes two rows of one flat buffer at offsets the
    // borrow checker cannot split; indexing is the straightforward shape.
    #[allow(clippy::needless_range_loop)]
    pub fn rebuild(&mut self, view: &SequenceView<'_>) {
        let n = view.len();
        self.num_instants = n;
        self.universe = view.num_tools();
        let row_blocks = self.universe.div_ceil(BLOCK_BITS);
        self.row_blocks = row_blocks;
        let level_count = if n == 0 { 0 } else { n.ilog2() as usize + 1 };
        self.level_rows.clear();
        let mut rows = 0usize;
        for k in 0..level_count {
            self.level_rows.push(rows);
            rows += n - (1usize << k) + 1;
        }
        // Every row is overwritten below, so stale storage needs no zeroing.
        self.storage.resize(rows * row_blocks, 0);
        if row_blocks == 1 {
            // The dominant layout (universe of at most 64 tools): one word
            // per row, so the level passes reduce to straight-line word ORs
            // the optimizer vectorizes.
            for (i, row) in self.storage[..n].iter_mut().enumerate() {
                *row = view.tools(i).blocks()[0];
            }
            for k in 1..level_count {
                let half = 1usize << (k - 1);
                let count = n - (1usize << k) + 1;
                let (built, level) = self.storage.split_at_mut(self.level_rows[k]);
                let prev = &built[self.level_rows[k - 1]..];
                for (row, (a, b)) in level[..count]
                    .iter_mut()
                    .zip(prev.iter().zip(&prev[half..]))
                {
                    *row = a | b;
                }
            }
            return;
        }
        for i in 0..n {
            self.storage[i * row_blocks..(i + 1) * row_blocks]
                .copy_from_slice(view.tools(i).blocks());
        }
        for k in 1..level_count {
            let half = 1usize << (k - 1);
            let count = n - (1usize << k) + 1;
            let (built, level) = self.storage.split_at_mut(self.level_rows[k] * row_blocks);
            let prev = &built[self.level_rows[k - 1] * row_blocks..];
            for i in 0..count {
                for j in 0..row_blocks {
                    level[i * row_blocks + j] =
                        prev[i * row_blocks + j] | prev[(i + half) * row_blocks + j];
                }
            }
        }
    }

    /// Number of instants the table covers.
    pub fn len(&self) -> usize {
        self.num_instants
    }

    pub fn is_empty(&self) -> bool {
        self.num_instants == 0
    }

    /// Union of the required-tool sets over instants `lo..=hi`, written
    /// into `out` (which must share the table's universe).
    pub fn query_into(&self, lo: usize, hi: usize, out: &mut ToolSet) -> Result<(), EvalError> {
        if lo > hi || hi >= self.num_instants {
            return Err(EvalError::BadRange {
                lo,
                hi,
                len: self.num_instants,
            });
        }
        self.query_unchecked(lo, hi, out);
        Ok(())
    }

    /// Allocating variant of [`Self::query_into`].
    pub fn query(&self, lo: usize, hi: usize) -> Result<ToolSet, EvalError> {
        let mut out = ToolSet::empty(self.universe);
        self.query_into(lo, hi, &mut out)?;
        Ok(out)
    }

    /// Hot-path query without the range check (debug-asserted instead).
    // The answer rows live at two offsets of one flat buffer; indexing is
    // the straightforward shape.
    #[allow(clippy::needless_range_loop)]
    #[inline]
    pub(crate) fn query_unchecked(&self, lo: usize, hi: usize, out: &mut ToolSet) {
        debug_assert!(lo <= hi && hi < self.num_instants);
        let k = (hi - lo + 1).ilog2() as usize;
        let row_blocks = self.row_blocks;
        let first = (self.level_rows[k] + lo) * row_blocks;
        let second = (self.level_rows[k] + hi + 1 - (1usize << k)) * row_blocks;
        let blocks = out.blocks_mut();
        debug_assert_eq!(blocks.len(), row_blocks, "query target shares the universe");
        for j in 0..row_blocks {
            blocks[j] = self.storage[first + j] | self.storage[second + j];
        }
    }
}

impl Default for RangeUnionTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Builds the table for a sequenced instance; convenience wrapper over
/// [`RangeUnionTable::from_view`].
pub fn range_union_table(view: &SequenceView<'_>) -> RangeUnionTable {
    RangeUnionTable::from_view(view)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample6;
    use crate::model::{sequence_view, Instance, JobSequence};
    use crate::rng::{seeded, shuffle, uniform_below};

    fn naive_union(view: &SequenceView<'_>, lo: usize, hi: usize) -> ToolSet {
        let mut out = ToolSet::empty(view.num_tools());
        for i in lo..=hi {
            out.union_with(view.tools(i));
        }
        out
    }

    #[test]
    fn golden_queries() {
        let inst = sample6();
        let seq = JobSequence::identity(6);
        let view = sequence_view(&inst, &seq).unwrap();
        let table = range_union_table(&view);
        assert_eq!(table.len(), 6);
        let q = table.query(1, 3).unwrap();
        assert_eq!(q, ToolSet::from_indices(7, [0, 1, 2, 3, 4, 6]));
        let whole = table.query(0, 5).unwrap();
        assert_eq!(whole, ToolSet::full(7));
        for i in 0..6 {
            assert_eq!(table.query(i, i).unwrap(), *view.tools(i), "instant {i}");
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let inst = sample6();
        let seq = JobSequence::identity(6);
        let view = sequence_view(&inst, &seq).unwrap();
        let table = range_union_table(&view);
        assert_eq!(
            table.query(4, 3).unwrap_err(),
            EvalError::BadRange {
                lo: 4,
                hi: 3,
                len: 6
            }
        );
        assert_eq!(
            table.query(0, 6).unwrap_err(),
            EvalError::BadRange {
                lo: 0,
                hi: 6,
                len: 6
            }
        );
    }

    #[test]
    fn matches_naive_union_on_random_instances() {
        let mut rng = seeded(72_026);
        let mut table = RangeUnionTable::new();
        for round in 0..40 {
            let n = 1 + uniform_below(&mut rng, 17) as usize;
            let m = 2 + uniform_below(&mut rng, 30) as usize;
            let jobs: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    let size = 1 + uniform_below(&mut rng, (m - 1).min(6) as u64) as usize;
                    let mut pool: Vec<usize> = (0..m).collect();
                    shuffle(&mut rng, &mut pool);
                    pool.truncate(size);
                    pool
                })
                .collect();
            let capacity = m - 1;
            let inst = Instance::from_tool_lists(m, capacity, &jobs).unwrap();
            let mut order: Vec<usize> = (0..n).collect();
            shuffle(&mut rng, &mut order);
            let seq = JobSequence::new(order).unwrap();
            let view = sequence_view(&inst, &seq).unwrap();
            table.rebuild(&view);
            for lo in 0..n {
                for hi in lo..n {
                    assert_eq!(
                        table.query(lo, hi).unwrap(),
                        naive_union(&view, lo, hi),
                        "round {round} range [{lo}, {hi}]"
                    );
                }
            }
        }
    }

    #[test]
    fn rebuild_across_shapes_reuses_cleanly() {
        let inst = sample6();
        let seq = JobSequence::identity(6);
        let view = sequence_view(&inst, &seq).unwrap();
        let mut table = RangeUnionTable::from_view(&view);
        let tiny = Instance::from_tool_lists(2, 1, &[vec![0]]).unwrap();
        let tiny_seq = JobSequence::identity(1);
        let tiny_view = sequence_view(&tiny, &tiny_seq).unwrap();
        table.rebuild(&tiny_view);
        assert_eq!(table.len(), 1);
        assert_eq!(table.query(0, 0).unwrap(), ToolSet::from_indices(2, [0]));
        table.rebuild(&view);
        assert_eq!(
            table.query(2, 4).unwrap(),
            ToolSet::from_indices(7, [0, 1, 2, 3, 4, 6])
        );
    }
}
