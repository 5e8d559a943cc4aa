//! Ground sets, subsets as bit masks, and set-interval lattices.
//!
//! Subsets are stored as packed 64-bit words. For ground sets of at most 64
//! elements the mask lives inline (no heap allocation); larger ground sets
//! spill into a word array. Set algebra is closed over a fixed ground set,
//! and mixing sets from different ground sets panics.

use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest supported ground-set size.
pub const MAX_GROUND: usize = 4096;

/// The ground set `{0, 1, ..., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSetSize { n });
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Iterator over all element indices.
    pub fn indices(&self) -> core::ops::Range<usize> {
        0..self.n
    }
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of a [`GroundSet`], stored as a bit mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: usize,
    words: SmallVec<[u64; 1]>,
}

impl ElementSet {
    pub fn empty(ground: GroundSet) -> Self {
        Self {
            n: ground.len(),
            words: smallvec::smallvec![0; word_count(ground.len())],
        }
    }

    pub fn full(ground: GroundSet) -> Self {
        let mut s = Self::empty(ground);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.mask_tail();
        s
    }

    pub fn singleton(ground: GroundSet, i: usize) -> Self {
        let mut s = Self::empty(ground);
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(ground: GroundSet, indices: I) -> Self {
        let mut s = Self::empty(ground);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds a set from the low `n` bits of `mask`. Only valid for `n <= 64`.
    pub fn from_mask(ground: GroundSet, mask: u64) -> Self {
        assert!(ground.len() <= 64, "from_mask requires n <= 64");
        let mut s = Self::empty(ground);
        s.words[0] = mask;
        s.mask_tail();
        s
    }

    /// The low word of the mask, when the ground set fits in one word.
    pub fn as_mask(&self) -> Option<u64> {
        if self.n <= 64 {
            Some(self.words[0])
        } else {
            None
        }
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        GroundSet { n: self.n }
    }

    #[inline]
    pub fn ground_len(&self) -> usize {
        self.n
    }

    // Zero out bits at positions >= n in the last word.
    fn mask_tail(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    fn check_peer(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "ground-set size mismatch: {} vs {}",
            self.n, other.n
        );
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        assert!(
            i < self.n,
            "element {} outside ground set of size {}",
            i,
            self.n
        );
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.n,
            "element {} outside ground set of size {}",
            i,
            self.n
        );
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(
            i < self.n,
            "element {} outside ground set of size {}",
            i,
            self.n
        );
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        self.check_peer(other);
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(&a, &b)| op(a, b))
            .collect();
        Self { n: self.n, words }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    /// Set difference `self \ other`.
    pub fn minus(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn sym_diff(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a ^ b)
    }

    /// Complement within the ground set.
    pub fn complement(&self) -> Self {
        let mut s = Self {
            n: self.n,
            words: self.words.iter().map(|&w| !w).collect(),
        };
        s.mask_tail();
        s
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_peer(other);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_peer(other);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & b == 0)
    }

    /// Compares the numeric value of the two masks (most significant word
    /// first). Used as the deterministic tie-break across equal-value
    /// solutions.
    pub fn mask_cmp(&self, other: &Self) -> Ordering {
        self.check_peer(other);
        for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Iterates member indices in ascending order.
    pub fn iter(&self) -> Indices<'_> {
        Indices {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

/// Ascending iterator over member indices.
pub struct Indices<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Indices<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
        }
        write!(f, "}}")
    }
}

/// Sorted comma-separated index list, e.g. `0,2,5`. The empty set renders
/// as an empty string. This is the serialization used by all CSV outputs.
impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
        }
        Ok(())
    }
}

/// The set interval `[S, T] = { X : S ⊆ X ⊆ T }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    lower: ElementSet,
    upper: ElementSet,
}

impl Lattice {
    pub fn new(lower: ElementSet, upper: ElementSet) -> Result<Self> {
        if lower.ground_len() != upper.ground_len() {
            return Err(Error::GroundSetMismatch {
                left: lower.ground_len(),
                right: upper.ground_len(),
            });
        }
        if !lower.is_subset_of(&upper) {
            return Err(Error::LatticeBounds);
        }
        Ok(Self { lower, upper })
    }

    /// The full lattice `[∅, N]`.
    pub fn full(ground: GroundSet) -> Self {
        Self {
            lower: ElementSet::empty(ground),
            upper: ElementSet::full(ground),
        }
    }

    /// The one-point lattice `[X, X]`.
    pub fn point(x: ElementSet) -> Self {
        Self {
            lower: x.clone(),
            upper: x,
        }
    }

    #[inline]
    pub fn lower(&self) -> &ElementSet {
        &self.lower
    }

    #[inline]
    pub fn upper(&self) -> &ElementSet {
        &self.upper
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.lower.ground()
    }

    /// Membership test: `S ⊆ X ⊆ T`.
    pub fn contains(&self, x: &ElementSet) -> bool {
        self.lower.is_subset_of(x) && x.is_subset_of(&self.upper)
    }

    /// Nesting test: `other ⊆ self` iff `S ⊆ S'` and `T' ⊆ T`.
    pub fn contains_lattice(&self, other: &Self) -> bool {
        self.lower.is_subset_of(&other.lower) && other.upper.is_subset_of(&self.upper)
    }

    /// The undecided elements `T \ S`.
    pub fn free(&self) -> ElementSet {
        self.upper.minus(&self.lower)
    }

    pub fn free_count(&self) -> usize {
        self.free().len()
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }
}
