//! Explicit bijections on `S_n` that move permutations between residue classes.
//!
//! `f_l` rotates the positions of the values `1..=l` one step to the right
//! (cyclically), shifting `inv` by `l` mod `n` while fixing `imaj` mod `l`.
//! `g` applies `f_d` to the pattern of the values `1..=kd` in place.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::shuffles::{place, IndexSet};

/// A permutation cut at a value threshold `l` into its two interleaved parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleSplit {
    /// Subsequence of the values `1..=l`.
    pub pi: Permutation,
    /// Subsequence of the values above `l`, lowered by `l`.
    pub sigma: Permutation,
    /// Positions of `pi` inside the original word.
    pub index: IndexSet,
}

impl ShuffleSplit {
    /// `sigma` with its original (unlowered) values.
    pub fn sigma_raw(&self) -> Vec<u8> {
        let l = self.pi.len() as u8;
        self.sigma.word().iter().map(|&v| v + l).collect()
    }

    pub fn reassemble(&self) -> Permutation {
        place(&self.pi, &self.sigma, &self.index).expect("split is consistent")
    }
}

pub fn split(tau: &Permutation, l: usize) -> Result<ShuffleSplit> {
    let n = tau.len();
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "threshold l = {l} outside 1..={n}"
        )));
    }
    let mut pi = Vec::with_capacity(l);
    let mut sigma = Vec::with_capacity(n - l);
    let mut positions = Vec::with_capacity(l);
    for (s, &a) in tau.word().iter().enumerate() {
        if a as usize <= l {
            pi.push(a);
            positions.push(s + 1);
        } else {
            sigma.push(a - l as u8);
        }
    }
    Ok(ShuffleSplit {
        pi: Permutation::from_word_unchecked(pi),
        sigma: Permutation::from_word_unchecked(sigma),
        index: IndexSet::new(positions, n)?,
    })
}

fn check_shift(n: usize, l: usize) -> Result<()> {
    if l == 0 || l >= n {
        return Err(Error::InvalidParameter(format!(
            "f_l needs 1 <= l < n (l = {l}, n = {n})"
        )));
    }
    Ok(())
}

/// Moves every position in `set` one step forward or back, cyclically in `[1, n]`.
fn rotate(set: &IndexSet, n: usize, forward: bool) -> IndexSet {
    let mut positions: Vec<usize> = set
        .positions()
        .iter()
        .map(|&i| match (forward, i) {
            (true, i) if i == n => 1,
            (true, i) => i + 1,
            (false, 1) => n,
            (false, i) => i - 1,
        })
        .collect();
    positions.sort_unstable();
    IndexSet::new(positions, n).expect("rotation stays in range")
}

pub fn f_l(tau: &Permutation, l: usize) -> Result<Permutation> {
    check_shift(tau.len(), l)?;
    let parts = split(tau, l)?;
    place(&parts.pi, &parts.sigma, &rotate(&parts.index, tau.len(), true))
}

pub fn f_l_inverse(tau_prime: &Permutation, l: usize) -> Result<Permutation> {
    check_shift(tau_prime.len(), l)?;
    let parts = split(tau_prime, l)?;
    place(&parts.pi, &parts.sigma, &rotate(&parts.index, tau_prime.len(), false))
}

fn check_lift(n: usize, d: usize, k: usize) -> Result<()> {
    if d == 0 || k < 2 || k * d > n {
        return Err(Error::InvalidParameter(format!(
            "g needs d >= 1, k >= 2 and kd <= n (d = {d}, k = {k}, n = {n})"
        )));
    }
    Ok(())
}

/// Applies `f_d` to the pattern of the values `1..=kd`, keeping their positions.
pub fn g_map(tau: &Permutation, d: usize, k: usize) -> Result<Permutation> {
    check_lift(tau.len(), d, k)?;
    let parts = split(tau, k * d)?;
    place(&f_l(&parts.pi, d)?, &parts.sigma, &parts.index)
}

pub fn g_map_inverse(tau: &Permutation, d: usize, k: usize) -> Result<Permutation> {
    check_lift(tau.len(), d, k)?;
    let parts = split(tau, k * d)?;
    place(&f_l_inverse(&parts.pi, d)?, &parts.sigma, &parts.index)
}

/// Removes the largest of the first `k` entries and reinserts it into each of
/// the spaces `0..k` of what remains (space 0 is left of everything).
pub fn prefix_max_orbit(p: &Permutation, k: usize) -> Result<Vec<Permutation>> {
    let n = p.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "orbit size k = {k} outside 1..={n}"
        )));
    }
    let (m, &max) = p.word()[..k]
        .iter()
        .enumerate()
        .max_by_key(|(_, &a)| a)
        .expect("k >= 1");
    let mut rest = p.word().to_vec();
    rest.remove(m);
    Ok((0..k)
        .map(|space| {
            let mut w = rest.clone();
            w.insert(space, max);
            Permutation::from_word_unchecked(w)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Permutations;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn split_examples() {
        let s = split(&p("6371452"), 4).unwrap();
        assert_eq!(s.index.positions(), &[2, 4, 5, 7]);
        assert_eq!(s.pi, p("3142"));
        assert_eq!(s.sigma_raw(), vec![6, 7, 5]);
        assert_eq!(s.sigma, p("231"));
        assert_eq!(s.reassemble(), p("6371452"));

        let s = split(&p("123"), 3).unwrap();
        assert_eq!(s.index.positions(), &[1, 2, 3]);
        assert!(s.sigma.is_empty());

        let s = split(&p("2143"), 2).unwrap();
        assert_eq!(s.index.positions(), &[1, 2]);
        assert_eq!(s.pi, p("21"));
        assert_eq!(s.sigma_raw(), vec![4, 3]);

        assert!(split(&p("123"), 0).is_err());
        assert!(split(&p("123"), 4).is_err());
    }

    #[test]
    fn f_l_examples() {
        assert_eq!(f_l(&p("6371452"), 4).unwrap(), p("3617425"));
        assert_eq!(f_l(&p("21"), 1).unwrap(), p("12"));
        assert_eq!(f_l(&p("12"), 1).unwrap(), p("21"));
        assert!(f_l(&p("123"), 3).is_err());
        assert!(f_l(&p("123"), 0).is_err());
    }

    #[test]
    fn f_l_has_order_dividing_n() {
        for tau in Permutations::new(5).unwrap() {
            for l in 1..5 {
                let mut x = tau.clone();
                for _ in 0..5 {
                    x = f_l(&x, l).unwrap();
                }
                assert_eq!(x, tau);
            }
        }
    }

    #[test]
    fn f_l_inverse_examples() {
        assert_eq!(f_l_inverse(&p("3617425"), 4).unwrap(), p("6371452"));
        assert_eq!(f_l_inverse(&p("12"), 1).unwrap(), p("21"));
        for tau in Permutations::new(5).unwrap() {
            for l in 1..5 {
                assert_eq!(f_l_inverse(&f_l(&tau, l).unwrap(), l).unwrap(), tau);
            }
        }
    }

    #[test]
    fn g_map_examples() {
        // kd = n: g is f_d on the whole word.
        for tau in Permutations::new(4).unwrap() {
            assert_eq!(g_map(&tau, 2, 2).unwrap(), f_l(&tau, 2).unwrap());
        }
        assert_eq!(g_map(&p("41532"), 1, 2).unwrap(), p("42531"));
        let image: BTreeSet<_> = Permutations::new(5)
            .unwrap()
            .map(|t| g_map(&t, 1, 3).unwrap())
            .collect();
        assert_eq!(image.len(), 120);
        assert!(g_map(&p("1234"), 1, 1).is_err());
        assert!(g_map(&p("1234"), 3, 2).is_err());
        assert_eq!(g_map_inverse(&p("42531"), 1, 2).unwrap(), p("41532"));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(prefix_max_orbit(&p("231"), 2).unwrap(), vec![p("321"), p("231")]);
        assert_eq!(prefix_max_orbit(&p("123"), 1).unwrap(), vec![p("123")]);
        assert!(prefix_max_orbit(&p("123"), 4).is_err());

        let mut orbits = BTreeSet::new();
        for q in Permutations::new(4).unwrap() {
            let o: BTreeSet<_> = prefix_max_orbit(&q, 3).unwrap().into_iter().collect();
            assert_eq!(o.len(), 3);
            assert!(o.contains(&q));
            orbits.insert(o);
        }
        assert_eq!(orbits.len(), 8);
    }

    #[test]
    fn orbit_covers_every_inv_residue() {
        for q in Permutations::new(5).unwrap() {
            for k in 1..=5 {
                let residues: BTreeSet<u32> = prefix_max_orbit(&q, k)
                    .unwrap()
                    .iter()
                    .map(|m| m.inv() % k as u32)
                    .collect();
                assert_eq!(residues.len(), k);
            }
        }
    }
}
