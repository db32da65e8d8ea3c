//! Fixed-universe tool sets stored as bit blocks.
//!
//! Every set is created over a universe `{0, .., m-1}` and keeps one bit per
//! tool in an array of [`Block`] words. All evaluators funnel their inner
//! loops through these operations, so they are kept branch-light and
//! allocation-free; binary operations require both operands to share the same
//! universe size.

/// Backing word for the bit array. The width is a build-time constant; 64 is
/// the natural choice on every target this crate cares about.
pub type Block = u64;

/// Number of bits per [`Block`].
pub const BLOCK_BITS: usize = Block::BITS as usize;

#[inline]
fn div_rem(x: usize) -> (usize, usize) {
    (x / BLOCK_BITS, x % BLOCK_BITS)
}

#[inline]
fn blocks_for(universe: usize) -> usize {
    universe.div_ceil(BLOCK_BITS)
}

/// A subset of the tools `{0, .., universe-1}`.
///
/// Invariant: bits at positions `>= universe` are always zero, so cardinality
/// and equality can work on whole blocks without masking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ToolSet {
    universe: usize,
    blocks: Vec<Block>,
}

impl ToolSet {
    /// The empty set over `{0, .., universe-1}`.
    pub fn empty(universe: usize) -> Self {
        ToolSet {
            universe,
            blocks: vec![0; blocks_for(universe)],
        }
    }

    /// The complete set `{0, .., universe-1}`.
    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (i, b) in s.blocks.iter_mut().enumerate() {
            let lo = i * BLOCK_BITS;
            let in_block = (universe - lo).min(BLOCK_BITS);
            *b = if in_block == BLOCK_BITS {
                Block::MAX
            } else {
                (1 << in_block) - 1
            };
        }
        s
    }

    /// Builds a set from tool indices (owned or borrowed). Panics if an
    /// index is outside the universe; callers that ingest untrusted data
    /// validate first.
    pub fn from_indices<I>(universe: usize, indices: I) -> Self
    where
        I: IntoIterator,
        I::Item: std::borrow::Borrow<usize>,
    {
        use std::borrow::Borrow;
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(*i.borrow());
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Raw blocks, low tools first. Bits beyond the universe are zero.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Mutable raw blocks for crate-internal bulk writers, which must keep
    /// bits at or above the universe zero.
    pub(crate) fn blocks_mut(&mut self) -> &mut [Block] {
        &mut self.blocks
    }

    /// Number of tools in the set.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, tool: usize) -> bool {
        debug_assert!(tool < self.universe);
        let (w, b) = div_rem(tool);
        self.blocks[w] >> b & 1 == 1
    }

    /// Inserts a tool; returns whether it was newly added.
    pub fn insert(&mut self, tool: usize) -> bool {
        assert!(
            tool < self.universe,
            "tool {tool} outside universe {}",
            self.universe
        );
        let (w, b) = div_rem(tool);
        let missing = self.blocks[w] >> b & 1 == 0;
        self.blocks[w] |= 1 << b;
        missing
    }

    /// Removes a tool; returns whether it was present.
    pub fn remove(&mut self, tool: usize) -> bool {
        debug_assert!(tool < self.universe);
        let (w, b) = div_rem(tool);
        let present = self.blocks[w] >> b & 1 == 1;
        self.blocks[w] &= !(1 << b);
        present
    }

    pub fn clear(&mut self) {
        self.blocks.fill(0);
    }

    /// Overwrites `self` with `other` without reallocating.
    pub fn copy_from(&mut self, other: &ToolSet) {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks.copy_from_slice(&other.blocks);
    }

    /// `self := self ∪ other`.
    pub fn union_with(&mut self, other: &ToolSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    /// `self := self ∩ other`.
    pub fn intersect_with(&mut self, other: &ToolSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    /// `self := a ∩ b` in one pass, skipping the intermediate copy; returns
    /// whether the result is nonempty (already on hand from the pass).
    pub(crate) fn assign_intersection(&mut self, a: &ToolSet, b: &ToolSet) -> bool {
        debug_assert_eq!(a.universe, b.universe);
        debug_assert_eq!(self.universe, a.universe);
        let mut any = 0;
        for ((dst, x), y) in self.blocks.iter_mut().zip(&a.blocks).zip(&b.blocks) {
            let word = x & y;
            *dst = word;
            any |= word;
        }
        any != 0
    }

    /// `self := self \ other`.
    pub fn subtract(&mut self, other: &ToolSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    /// `|self ∩ other|` without materializing the intersection.
    pub fn intersection_len(&self, other: &ToolSet) -> usize {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &ToolSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ToolSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & b == 0)
    }

    /// Smallest tool in the set, if any.
    pub fn first(&self) -> Option<usize> {
        for (w, &b) in self.blocks.iter().enumerate() {
            if b != 0 {
                return Some(w * BLOCK_BITS + b.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Moves up to `k` of the lowest-indexed tools of `source \ self` into
    /// `self`; returns how many were inserted.
    pub fn insert_lowest_from(&mut self, source: &ToolSet, k: usize) -> usize {
        debug_assert_eq!(self.universe, source.universe);
        let mut left = k;
        for (a, b) in self.blocks.iter_mut().zip(&source.blocks) {
            if left == 0 {
                break;
            }
            let mut avail = b & !*a;
            let c = avail.count_ones() as usize;
            if c <= left {
                *a |= avail;
                left -= c;
            } else {
                while left > 0 {
                    let lsb = avail & avail.wrapping_neg();
                    *a |= lsb;
                    avail ^= lsb;
                    left -= 1;
                }
            }
        }
        k - left
    }

    /// Tools in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            blocks: &self.blocks,
            word: 0,
            current: self.blocks.first().copied().unwrap_or(0),
        }
    }
}

impl std::fmt::Debug for ToolSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a ToolSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Ascending iterator over set members.
pub struct Iter<'a> {
    blocks: &'a [Block],
    word: usize,
    current: Block,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word += 1;
            if self.word >= self.blocks.len() {
                return None;
            }
            self.current = self.blocks[self.word];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word * BLOCK_BITS + bit)
    }
}
