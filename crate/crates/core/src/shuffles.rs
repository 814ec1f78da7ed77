//! Shuffles of two sequences, restricted by position set or by gap sizes.
//!
//! In the `⧢⁺` setting the second argument is upshifted by `|π|`, so every
//! element of `σ` exceeds every element of `π` and a threshold `l` recovers
//! the split of a shuffle into its two parts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{Permutation, StatPair};
use crate::residue::witness_sets;
use crate::verify::VerificationReport;

/// Strictly increasing 1-based positions inside `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    positions: Vec<usize>,
}

impl IndexSet {
    pub fn new(positions: Vec<usize>, n: usize) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "index set {positions:?} is not strictly increasing"
            )));
        }
        if positions.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidParameter(format!(
                "index set {positions:?} leaves [1, {n}]"
            )));
        }
        Ok(IndexSet { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positions.binary_search(&i).is_ok()
    }

    /// All `C(n, l)` subsets of size `l`, in lexicographic order.
    pub fn all(n: usize, l: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(l);
        fn rec(start: usize, n: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            if cur.len() == l {
                out.push(IndexSet {
                    positions: cur.clone(),
                });
                return;
            }
            for i in start..=n {
                if n - i + 1 < l - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, l, cur, out);
                cur.pop();
            }
        }
        rec(1, n, l, &mut cur, &mut out);
        out
    }
}

/// Gaps `g_1, …, g_{l-1}` between consecutive positions of `π`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapComposition {
    gaps: Vec<usize>,
}

impl GapComposition {
    pub fn new(gaps: Vec<usize>) -> Result<Self> {
        if gaps.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "gap composition {gaps:?} has a zero part"
            )));
        }
        Ok(GapComposition { gaps })
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    /// Distance from the first to the last position of `π`.
    pub fn span(&self) -> usize {
        self.gaps.iter().sum()
    }

    /// All compositions with `parts` parts and span at most `max_span`.
    pub fn all(parts: usize, max_span: usize) -> Vec<GapComposition> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(parts);
        fn rec(parts: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<GapComposition>) {
            if cur.len() == parts {
                out.push(GapComposition { gaps: cur.clone() });
                return;
            }
            let remaining = parts - cur.len() - 1;
            for g in 1..=budget.saturating_sub(remaining) {
                cur.push(g);
                rec(parts, budget - g, cur, out);
                cur.pop();
            }
        }
        if parts <= max_span || parts == 0 {
            rec(parts, max_span, &mut cur, &mut out);
        }
        out
    }
}

impl fmt::Display for GapComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gaps.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for GapComposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return GapComposition::new(Vec::new());
        }
        let gaps = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad gap `{t}`")))
            })
            .collect::<Result<_>>()?;
        GapComposition::new(gaps)
    }
}

/// Every interleaving of `pi` and `sigma` that keeps each one's internal order, sorted.
pub fn shuffle(pi: &[u8], sigma: &[u8]) -> Result<Vec<Vec<u8>>> {
    let left: BTreeSet<u8> = pi.iter().copied().collect();
    if let Some(v) = sigma.iter().find(|v| left.contains(v)) {
        return Err(Error::InvalidParameter(format!(
            "value {v} occurs in both sequences"
        )));
    }
    let n = pi.len() + sigma.len();
    let mut out: Vec<Vec<u8>> = IndexSet::all(n, pi.len())
        .iter()
        .map(|set| interleave(pi, sigma, set))
        .collect();
    out.sort();
    Ok(out)
}

/// `pi` at the positions of `set`, `sigma` at the rest, both in order.
fn interleave(pi: &[u8], sigma: &[u8], set: &IndexSet) -> Vec<u8> {
    let n = pi.len() + sigma.len();
    let mut word = Vec::with_capacity(n);
    let (mut a, mut b) = (pi.iter(), sigma.iter());
    for pos in 1..=n {
        let next = if set.contains(pos) { a.next() } else { b.next() };
        word.push(*next.expect("sizes agree"));
    }
    word
}

fn upshift(sigma: &Permutation, by: usize) -> Vec<u8> {
    sigma.word().iter().map(|&v| v + by as u8).collect()
}

/// Places `pi` at `set` and `sigma + |pi|` elsewhere.
pub fn place(pi: &Permutation, sigma: &Permutation, set: &IndexSet) -> Result<Permutation> {
    let n = pi.len() + sigma.len();
    if set.len() != pi.len() || set.positions().last().is_some_and(|&i| i > n) {
        return Err(Error::InvalidParameter(format!(
            "index set of size {} cannot hold a permutation of [{}] inside [{n}]",
            set.len(),
            pi.len()
        )));
    }
    Ok(Permutation::from_word_unchecked(interleave(
        pi.word(),
        &upshift(sigma, pi.len()),
        set,
    )))
}

/// `π ⧢⁺ σ`: shuffles of `pi` with `sigma` upshifted by `|pi|`.
pub fn shuffle_plus(pi: &Permutation, sigma: &Permutation) -> Vec<Permutation> {
    shuffle(pi.word(), &upshift(sigma, pi.len()))
        .expect("value ranges are disjoint")
        .into_iter()
        .map(Permutation::from_word_unchecked)
        .collect()
}

/// `M ⧢_I⁺ N`: members of `M` at positions `I`, upshifted members of `N` elsewhere.
pub fn shuffle_at(
    m: &[Permutation],
    n_set: &[Permutation],
    set: &IndexSet,
) -> Result<Vec<Permutation>> {
    let mut out = Vec::with_capacity(m.len() * n_set.len());
    for pi in m {
        if pi.len() != set.len() {
            return Err(Error::InvalidParameter(format!(
                "|I| = {} but the first set holds permutations of [{}]",
                set.len(),
                pi.len()
            )));
        }
        for sigma in n_set {
            out.push(place(pi, sigma, set)?);
        }
    }
    out.sort();
    Ok(out)
}

/// `wt I = Σ_{i∈I} i − C(l+1, 2)`.
pub fn wt_index(set: &IndexSet, l: usize) -> Result<u32> {
    if set.len() != l {
        return Err(Error::InvalidParameter(format!(
            "|I| = {} but l = {l}",
            set.len()
        )));
    }
    let sum: usize = set.positions().iter().sum();
    Ok((sum - l * (l + 1) / 2) as u32)
}

/// `π ⧢_γ⁺ σ`: shuffles whose `π`-positions have consecutive differences `γ`.
pub fn shuffle_gamma(
    pi: &Permutation,
    sigma: &Permutation,
    gamma: &GapComposition,
) -> Result<Vec<Permutation>> {
    let l = pi.len();
    let n = l + sigma.len();
    if l == 0 {
        return Err(Error::InvalidParameter("π must be nonempty".into()));
    }
    if gamma.gaps().len() != l - 1 {
        return Err(Error::InvalidParameter(format!(
            "gap composition has {} parts, expected {}",
            gamma.gaps().len(),
            l - 1
        )));
    }
    if gamma.span() > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "span {} exceeds n - 1 = {}",
            gamma.span(),
            n - 1
        )));
    }
    let mut out = Vec::new();
    for first in 1..=n - gamma.span() {
        let mut positions = vec![first];
        for g in gamma.gaps() {
            positions.push(positions.last().unwrap() + g);
        }
        out.push(place(pi, sigma, &IndexSet { positions })?);
    }
    out.sort();
    Ok(out)
}

/// `wt γ = Σ_{t=1}^{l−1} (g_t − 1)(l − t)`.
pub fn wt_gamma(gamma: &GapComposition, l: usize) -> Result<u32> {
    if gamma.gaps().len() + 1 != l {
        return Err(Error::InvalidParameter(format!(
            "gap composition has {} parts, expected {}",
            gamma.gaps().len(),
            l.saturating_sub(1)
        )));
    }
    Ok(gamma
        .gaps()
        .iter()
        .enumerate()
        .map(|(t, &g)| ((g - 1) * (l - t - 1)) as u32)
        .sum())
}

/// Cross inversions: pairs `s < t` with `τ_s > l ≥ τ_t`.
pub fn inv_between(tau: &Permutation, l: usize) -> u32 {
    let mut big_seen = 0;
    let mut count = 0;
    for &a in tau.word() {
        if a as usize > l {
            big_seen += 1;
        } else {
            count += big_seen;
        }
    }
    count
}

/// Part of `imaj τ` from value pairs `(i, i+1)` that straddle the threshold `l`.
pub fn imaj_between(tau: &Permutation, l: usize) -> u32 {
    let n = tau.len();
    let mut pos = vec![0usize; n + 1];
    for (s, &a) in tau.word().iter().enumerate() {
        pos[a as usize] = s;
    }
    (1..n)
        .filter(|&i| (i <= l) != (i < l))
        .filter(|&i| pos[i + 1] < pos[i])
        .map(|i| i as u32)
        .sum()
}

/// Checks that the shuffle decomposition of `M_n^{k,l}(i, j)` over position
/// sets is a disjoint union equal to the directly enumerated set.
pub fn verify_grind(n: usize, k: usize, l: usize, i: usize, j: usize) -> Result<VerificationReport> {
    check_decomposition_params(n, k, l, i, j)?;
    let started = std::time::Instant::now();
    let target = &witness_sets(n, k, l, StatPair::InvImaj)?[i][j];
    let head = witness_sets(l, k, l, StatPair::InvImaj)?;
    let tail = witness_sets(n - l, k, l, StatPair::InvImaj)?;
    let mut union = Vec::new();
    for set in IndexSet::all(n, l) {
        let wt = wt_index(&set, l)? as usize;
        for (i1, j1, i2, j2) in residue_quads(k, l) {
            if (i1 + i2 + wt) % k == i && (j1 + j2) % l == j {
                union.extend(shuffle_at(&head[i1][j1], &tail[i2][j2], &set)?);
            }
        }
    }
    Ok(compare_union(
        "lem-grind",
        vec![("n", n as i64), ("k", k as i64), ("l", l as i64), ("i", i as i64), ("j", j as i64)],
        union,
        target,
        started,
    ))
}

/// Gap-composition analogue of [`verify_grind`] for `M_n^{l,l}(i, j)`.
pub fn verify_ind(n: usize, l: usize, i: usize, j: usize) -> Result<VerificationReport> {
    check_decomposition_params(n, l, l, i, j)?;
    let started = std::time::Instant::now();
    let target = &witness_sets(n, l, l, StatPair::InvImaj)?[i][j];
    let head = witness_sets(l, l, l, StatPair::InvImaj)?;
    let tail = witness_sets(n - l, l, l, StatPair::InvImaj)?;
    let mut union = Vec::new();
    for gamma in GapComposition::all(l - 1, n - 1) {
        let wt = wt_gamma(&gamma, l)? as usize;
        for (i1, j1, i2, j2) in residue_quads(l, l) {
            if (i1 + i2 + wt) % l == i && (j1 + j2) % l == j {
                for pi in &head[i1][j1] {
                    for sigma in &tail[i2][j2] {
                        union.extend(shuffle_gamma(pi, sigma, &gamma)?);
                    }
                }
            }
        }
    }
    Ok(compare_union(
        "lem-ind",
        vec![("n", n as i64), ("l", l as i64), ("i", i as i64), ("j", j as i64)],
        union,
        target,
        started,
    ))
}

fn check_decomposition_params(n: usize, k: usize, l: usize, i: usize, j: usize) -> Result<()> {
    if l == 0 || k == 0 || n < l {
        return Err(Error::InvalidParameter(format!(
            "need k, l >= 1 and n >= l (n = {n}, k = {k}, l = {l})"
        )));
    }
    if i >= k || j >= l {
        return Err(Error::InvalidParameter(format!(
            "residues ({i}, {j}) out of range for moduli ({k}, {l})"
        )));
    }
    Ok(())
}

fn residue_quads(k: usize, l: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..k).flat_map(move |a| {
        (0..l).flat_map(move |b| (0..k).flat_map(move |c| (0..l).map(move |d| (a, b, c, d))))
    })
}

/// Disjointness of `union` plus set equality with `target` (which is sorted).
pub(crate) fn compare_union(
    id: &str,
    params: Vec<(&str, i64)>,
    mut union: Vec<Permutation>,
    target: &[Permutation],
    started: std::time::Instant,
) -> VerificationReport {
    let pieces = union.len();
    union.sort();
    let duplicate = union.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone());
    union.dedup();
    let witness = if let Some(dup) = duplicate {
        Some(format!("{dup} occurs in more than one piece of the union"))
    } else if union.as_slice() != target {
        let extra = union.iter().find(|p| target.binary_search(p).is_err());
        let missing = target.iter().find(|p| union.binary_search(p).is_err());
        Some(format!(
            "union has {pieces} elements, target has {}; first extra: {}, first missing: {}",
            target.len(),
            extra.map_or("none".into(), |p| p.to_string()),
            missing.map_or("none".into(), |p| p.to_string()),
        ))
    } else {
        None
    };
    VerificationReport::from_check(id, params, witness, started.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn words(v: &[Permutation]) -> Vec<String> {
        v.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn shuffle_examples() {
        let got = shuffle(&[1, 2], &[4, 3]).unwrap();
        let want: Vec<Vec<u8>> = ["1243", "1423", "1432", "4123", "4132", "4312"]
            .iter()
            .map(|s| s.bytes().map(|b| b - b'0').collect())
            .collect();
        assert_eq!(got, want);
        assert_eq!(shuffle(&[2, 1], &[]).unwrap(), vec![vec![2, 1]]);
        assert_eq!(shuffle(&[1], &[2, 3]).unwrap().len(), 3);
        assert!(shuffle(&[1, 2], &[2]).is_err());
    }

    #[test]
    fn shuffle_plus_examples() {
        let a = words(&shuffle_plus(&p("12"), &p("21")));
        assert_eq!(a, ["1243", "1423", "1432", "4123", "4132", "4312"]);
        assert_eq!(shuffle_plus(&Permutation::empty(), &p("21")), vec![p("21")]);
        assert_eq!(shuffle_plus(&p("12"), &p("123")).len(), 10);
    }

    #[test]
    fn shuffle_at_examples() {
        let m = [p("12"), p("21")];
        let n = [p("231"), p("321")];
        let set = IndexSet::new(vec![2, 5], 5).unwrap();
        assert_eq!(words(&shuffle_at(&m, &n, &set).unwrap()), ["41532", "42531", "51432", "52431"]);

        let prefix = IndexSet::new(vec![1, 2], 5).unwrap();
        assert_eq!(shuffle_at(&[p("21")], &[p("132")], &prefix).unwrap(), vec![p("21354")]);

        assert!(shuffle_at(&[p("123")], &n, &set).is_err());
    }

    #[test]
    fn shuffle_at_has_product_cardinality() {
        let m: Vec<_> = ["123", "213", "312"].iter().map(|s| p(s)).collect();
        let n: Vec<_> = ["12", "21"].iter().map(|s| p(s)).collect();
        for set in IndexSet::all(5, 3) {
            assert_eq!(shuffle_at(&m, &n, &set).unwrap().len(), 6);
        }
    }

    #[test]
    fn wt_index_examples() {
        assert_eq!(wt_index(&IndexSet::new(vec![2, 5], 5).unwrap(), 2).unwrap(), 4);
        assert_eq!(wt_index(&IndexSet::new(vec![1, 2, 3], 5).unwrap(), 3).unwrap(), 0);
        assert_eq!(wt_index(&IndexSet::new(vec![4, 5], 5).unwrap(), 2).unwrap(), 6);
        assert!(wt_index(&IndexSet::new(vec![4, 5], 5).unwrap(), 3).is_err());
        assert_eq!(inv_between(&p("41532"), 2), 4);
    }

    #[test]
    fn shuffle_gamma_examples() {
        let gamma: GapComposition = "1,2".parse().unwrap();
        assert_eq!(
            words(&shuffle_gamma(&p("132"), &p("321"), &gamma).unwrap()),
            ["136254", "613524", "651342"]
        );
        let empty = GapComposition::new(vec![]).unwrap();
        assert_eq!(
            shuffle_gamma(&p("1"), &p("21"), &empty).unwrap(),
            shuffle_plus(&p("1"), &p("21"))
        );
        let ones = GapComposition::new(vec![1, 1]).unwrap();
        assert_eq!(shuffle_gamma(&p("213"), &p("2143"), &ones).unwrap().len(), 5);
        let wide = GapComposition::new(vec![3, 3]).unwrap();
        assert!(shuffle_gamma(&p("213"), &p("21"), &wide).is_err());
        assert!(GapComposition::new(vec![1, 0]).is_err());
    }

    #[test]
    fn wt_gamma_examples() {
        let g12 = GapComposition::new(vec![1, 2]).unwrap();
        assert_eq!(wt_gamma(&g12, 3).unwrap(), 1);
        assert_eq!(inv_between(&p("136254"), 3), 1);
        assert_eq!(wt_gamma(&GapComposition::new(vec![1, 1, 1]).unwrap(), 4).unwrap(), 0);
        let g3 = GapComposition::new(vec![3]).unwrap();
        assert_eq!(wt_gamma(&g3, 2).unwrap(), 2);
        // Anchored shuffle: π's first element leads, σ = 21 fills the gap.
        let anchored = shuffle_gamma(&p("12"), &p("21"), &g3).unwrap();
        assert_eq!(anchored[0].at(1), 1);
        assert_eq!(inv_between(&anchored[0], 2), 2);
    }

    #[test]
    fn inv_between_examples() {
        assert_eq!(inv_between(&p("41532"), 2), 4);
        assert_eq!(inv_between(&p("21354"), 2), 0);
        assert_eq!(inv_between(&p("54312"), 2), 6);
    }

    #[test]
    fn imaj_between_examples() {
        // 3 sits left of 2, so the straddling pair (2, 3) contributes 2.
        assert_eq!(imaj_between(&p("41532"), 2), 2);
        assert_eq!(imaj_between(&p("21354"), 2), 0);
        assert_eq!(imaj_between(&p("12"), 2), 0);
    }

    #[test]
    fn gap_compositions_enumerated() {
        assert_eq!(GapComposition::all(0, 5), vec![GapComposition::new(vec![]).unwrap()]);
        assert_eq!(GapComposition::all(2, 3).len(), 3);
        assert!(GapComposition::all(3, 2).is_empty());
        assert_eq!("(1,2)".parse::<GapComposition>().unwrap().to_string(), "(1,2)");
    }

    #[test]
    fn index_sets_enumerated() {
        assert_eq!(IndexSet::all(5, 2).len(), 10);
        assert_eq!(IndexSet::all(3, 0).len(), 1);
        assert!(IndexSet::new(vec![2, 2], 5).is_err());
        assert!(IndexSet::new(vec![0], 5).is_err());
        assert!(IndexSet::new(vec![6], 5).is_err());
    }

    #[test]
    fn grind_examples() {
        for i in 0..3 {
            for j in 0..2 {
                assert!(verify_grind(4, 3, 2, i, j).unwrap().passed());
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!(verify_grind(2, 2, 2, i, j).unwrap().passed());
            }
        }
        assert!(verify_grind(3, 2, 4, 0, 0).is_err());
    }

    #[test]
    fn ind_examples() {
        for i in 0..2 {
            for j in 0..2 {
                assert!(verify_ind(4, 2, i, j).unwrap().passed());
                assert!(verify_ind(2, 2, i, j).unwrap().passed());
            }
        }
    }
}
