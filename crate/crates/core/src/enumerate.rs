//! Exhaustive enumeration of `S_n` in lexicographic order.
//!
//! The stream is addressed by lexicographic rank, so it can be cut into
//! disjoint contiguous [`RankRange`]s and handed to independent workers.
//! [`JointDistribution`] is the per-range result: a histogram of
//! `(row statistic, imaj)` pairs that merges by addition and reduces to a
//! count matrix for any pair of moduli.

use crate::error::{Error, Result};
use crate::perm::{Permutation, StatPair};

/// Largest `n` any enumeration accepts (14! ≈ 8.7e10).
pub const HARD_LIMIT: usize = 14;

pub fn factorial(n: usize) -> u64 {
    assert!(n <= 20, "{n}! overflows u64");
    (1..=n as u64).product()
}

pub fn check_limit(n: usize, limit: usize) -> Result<()> {
    let limit = limit.min(HARD_LIMIT);
    if n > limit {
        Err(Error::SizeLimit { n, limit })
    } else {
        Ok(())
    }
}

/// Half-open interval `[start, end)` of lexicographic ranks in `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankRange {
    pub start: u64,
    pub end: u64,
}

impl RankRange {
    pub fn full(n: usize) -> Self {
        RankRange {
            start: 0,
            end: factorial(n),
        }
    }

    pub fn full_checked(n: usize) -> Result<Self> {
        check_limit(n, HARD_LIMIT)?;
        Ok(Self::full(n))
    }

    pub fn len(&self) -> u64 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cuts `[0, n!)` into at most `parts` contiguous, disjoint, covering ranges.
    pub fn split(n: usize, parts: usize) -> Vec<RankRange> {
        let total = factorial(n);
        let parts = (parts.max(1) as u64).min(total);
        (0..parts)
            .map(|i| RankRange {
                start: total * i / parts,
                end: total * (i + 1) / parts,
            })
            .collect()
    }
}

/// Permutation of lexicographic rank `rank` in `S_n`.
pub fn unrank(n: usize, mut rank: u64) -> Permutation {
    let mut pool: Vec<u8> = (1..=n as u8).collect();
    let mut word = Vec::with_capacity(n);
    for depth in 0..n {
        let block = factorial(n - depth - 1);
        let idx = (rank / block) as usize;
        rank %= block;
        word.push(pool.remove(idx));
    }
    Permutation::from_word_unchecked(word)
}

pub fn rank(p: &Permutation) -> u64 {
    let n = p.len();
    let mut pool: Vec<u8> = (1..=n as u8).collect();
    let mut r = 0;
    for (depth, &a) in p.word().iter().enumerate() {
        let idx = pool.iter().position(|&b| b == a).expect("bijection");
        pool.remove(idx);
        r += idx as u64 * factorial(n - depth - 1);
    }
    r
}

/// Lexicographic stream over a rank range of `S_n`.
pub struct Permutations {
    word: Vec<u8>,
    remaining: u64,
}

impl Permutations {
    pub fn new(n: usize) -> Result<Self> {
        Self::range(n, RankRange::full(n.min(HARD_LIMIT)))
    }

    pub fn range(n: usize, range: RankRange) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("enumeration needs n >= 1".into()));
        }
        check_limit(n, HARD_LIMIT)?;
        let end = range.end.min(factorial(n));
        let remaining = end.saturating_sub(range.start);
        let word = if remaining > 0 {
            unrank(n, range.start).into_word()
        } else {
            Vec::new()
        };
        Ok(Permutations { word, remaining })
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let out = Permutation::from_word_unchecked(self.word.clone());
        self.remaining -= 1;
        if self.remaining > 0 {
            next_lex(&mut self.word);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

fn next_lex(w: &mut [u8]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// Histogram of `(row statistic, imaj)` over a set of permutations of `S_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    n: usize,
    statpair: StatPair,
    width: usize,
    counts: Vec<u64>,
}

impl JointDistribution {
    pub fn empty(n: usize, statpair: StatPair) -> Self {
        let width = n * n.saturating_sub(1) / 2 + 1;
        JointDistribution {
            n,
            statpair,
            width,
            counts: vec![0; width * width],
        }
    }

    /// Counts every permutation whose rank lies in `range`.
    pub fn count_range(n: usize, statpair: StatPair, range: RankRange) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("enumeration needs n >= 1".into()));
        }
        check_limit(n, HARD_LIMIT)?;
        let mut dist = JointDistribution::empty(n, statpair);
        let range = RankRange {
            start: range.start,
            end: range.end.min(factorial(n)),
        };
        if range.is_empty() {
            return Ok(dist);
        }
        let mut kernel = Kernel {
            n,
            width: dist.width,
            hist: &mut dist.counts,
            fact: std::array::from_fn(factorial),
        };
        let root = Node::default();
        match statpair {
            StatPair::MajImaj => kernel.ranged::<false>(root, 0, range),
            StatPair::InvImaj => kernel.ranged::<true>(root, 0, range),
        }
        Ok(dist)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn statpair(&self) -> StatPair {
        self.statpair
    }

    /// Largest value either statistic can take, `n(n-1)/2`.
    pub fn max_stat(&self) -> usize {
        self.width - 1
    }

    pub fn get(&self, row_stat: usize, imaj: usize) -> u64 {
        self.counts[row_stat * self.width + imaj]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &JointDistribution) {
        assert_eq!((self.n, self.statpair), (other.n, other.statpair));
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Folds the histogram into residue classes mod `k` (rows) and `l` (columns).
    pub fn reduce(&self, k: usize, l: usize) -> Vec<Vec<u64>> {
        assert!(k >= 1 && l >= 1);
        let mut out = vec![vec![0u64; l]; k];
        for s in 0..self.width {
            for t in 0..self.width {
                out[s % k][t % l] += self.counts[s * self.width + t];
            }
        }
        out
    }

    /// Marginal distribution of the row statistic.
    pub fn row_marginal(&self) -> Vec<u64> {
        self.counts.chunks(self.width).map(|r| r.iter().sum()).collect()
    }
}

#[derive(Clone, Copy, Default)]
struct Node {
    depth: usize,
    used: u32,
    last: u32,
    row: u32,
    imaj: u32,
}

struct Kernel<'a> {
    n: usize,
    width: usize,
    hist: &'a mut [u64],
    fact: [u64; HARD_LIMIT + 1],
}

impl Kernel<'_> {
    /// Places value `v` after `node`. Bit `v` of `used` marks value `v` as placed.
    #[inline(always)]
    fn child<const INV: bool>(node: Node, v: u32) -> Node {
        let row_inc = if INV {
            (node.used >> (v + 1)).count_ones()
        } else if node.last > v {
            node.depth as u32
        } else {
            0
        };
        let imaj_inc = if node.used & (1 << (v + 1)) != 0 { v } else { 0 };
        Node {
            depth: node.depth + 1,
            used: node.used | (1 << v),
            last: v,
            row: node.row + row_inc,
            imaj: node.imaj + imaj_inc,
        }
    }

    fn full<const INV: bool>(&mut self, node: Node) {
        let free = !node.used & (((1u32 << self.n) - 1) << 1);
        if node.depth + 1 == self.n {
            let leaf = Self::child::<INV>(node, free.trailing_zeros());
            self.hist[leaf.row as usize * self.width + leaf.imaj as usize] += 1;
            return;
        }
        let mut rest = free;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            self.full::<INV>(Self::child::<INV>(node, v));
        }
    }

    /// Visits the subtree under `node` (first rank `base`) restricted to `range`.
    fn ranged<const INV: bool>(&mut self, node: Node, base: u64, range: RankRange) {
        let size = self.fact[self.n - node.depth];
        if base >= range.end || base + size <= range.start {
            return;
        }
        if node.depth == self.n {
            self.hist[node.row as usize * self.width + node.imaj as usize] += 1;
            return;
        }
        if range.start <= base && base + size <= range.end {
            self.full::<INV>(node);
            return;
        }
        let child_size = self.fact[self.n - node.depth - 1];
        let mut rest = !node.used & (((1u32 << self.n) - 1) << 1);
        let mut child_base = base;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            self.ranged::<INV>(Self::child::<INV>(node, v), child_base, range);
            child_base += child_size;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn enumerate_small() {
        let one: Vec<_> = Permutations::new(1).unwrap().collect();
        assert_eq!(one, vec![Permutation::identity(1)]);
        let three: BTreeSet<_> = Permutations::new(3).unwrap().collect();
        assert_eq!(three.len(), 6);
    }

    #[test]
    fn inv_counts_for_s4() {
        let mut hist = [0u32; 7];
        for p in Permutations::new(4).unwrap() {
            hist[p.inv() as usize] += 1;
        }
        assert_eq!(hist, [1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn enumeration_is_lexicographic_and_ranked() {
        let all: Vec<_> = Permutations::new(5).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (r, p) in all.iter().enumerate() {
            assert_eq!(rank(p), r as u64);
            assert_eq!(&unrank(5, r as u64), p);
        }
    }

    #[test]
    fn rank_ranges_partition_the_stream() {
        let parts = RankRange::split(6, 7);
        assert_eq!(parts.len(), 7);
        let mut seen = BTreeSet::new();
        for r in &parts {
            for p in Permutations::range(6, *r).unwrap() {
                assert!(seen.insert(p));
            }
        }
        assert_eq!(seen.len(), 720);
    }

    #[test]
    fn size_limit_enforced() {
        assert_eq!(
            Permutations::new(15).err(),
            Some(Error::SizeLimit { n: 15, limit: 14 })
        );
        assert!(matches!(
            JointDistribution::count_range(15, StatPair::MajImaj, RankRange { start: 0, end: 1 }),
            Err(Error::SizeLimit { .. })
        ));
        assert!(check_limit(13, 12).is_err());
    }

    fn brute(n: usize, statpair: StatPair, range: RankRange) -> JointDistribution {
        let mut d = JointDistribution::empty(n, statpair);
        for p in Permutations::range(n, range).unwrap() {
            let idx = statpair.row_stat(&p) as usize * d.width + p.imaj() as usize;
            d.counts[idx] += 1;
        }
        d
    }

    #[test]
    fn kernel_matches_direct_statistics() {
        for n in 1..=7 {
            for sp in [StatPair::MajImaj, StatPair::InvImaj] {
                let full = RankRange::full(n);
                assert_eq!(
                    JointDistribution::count_range(n, sp, full).unwrap(),
                    brute(n, sp, full)
                );
            }
        }
    }

    #[test]
    fn kernel_respects_ragged_ranges() {
        let n = 6;
        for sp in [StatPair::MajImaj, StatPair::InvImaj] {
            for (s, e) in [(0, 1), (5, 6), (7, 719), (100, 377), (719, 720), (3, 3)] {
                let r = RankRange { start: s, end: e };
                assert_eq!(JointDistribution::count_range(n, sp, r).unwrap(), brute(n, sp, r));
            }
        }
    }

    #[test]
    fn merged_parts_equal_whole() {
        let n = 7;
        let whole = JointDistribution::count_range(n, StatPair::InvImaj, RankRange::full(n)).unwrap();
        let mut merged = JointDistribution::empty(n, StatPair::InvImaj);
        for r in RankRange::split(n, 13) {
            merged.merge(&JointDistribution::count_range(n, StatPair::InvImaj, r).unwrap());
        }
        assert_eq!(merged, whole);
        assert_eq!(whole.total(), 5040);
    }
}
