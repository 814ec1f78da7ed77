//! Standard Young tableaux and the tableau-side count matrix.
//!
//! Summing `f^λ_{k,i} · f^λ_{l,j}` over shapes `λ ⊢ n`, where `f^λ_{k,i}`
//! counts tableaux of shape `λ` with major index `≡ i (mod k)`, gives an
//! enumeration-free route to the joint `(maj, imaj)` class counts.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::perm::StatPair;
use crate::residue::ResidueMatrix;

/// Largest `n` accepted by [`joint_matrix_syt`].
pub const SYT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "{parts:?} is not a weakly decreasing list of positive parts"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of standard Young tableaux of this shape, by the hook-length formula.
    pub fn hook_length_count(&self) -> u64 {
        let n = self.size();
        let mut hooks = BigUint::from(1u32);
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                let arm = len - c - 1;
                let leg = self.parts[r + 1..].iter().filter(|&&l| l > c).count();
                hooks *= (arm + leg + 1) as u64;
            }
        }
        let fact: BigUint = (1..=n as u64).product();
        u64::try_from(fact / hooks).expect("fits for desk-scale n")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for part in (1..=remaining.min(cap)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<u8>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.size();
        let mut seen = vec![false; n + 1];
        for &v in rows.iter().flatten() {
            let v = v as usize;
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("bad filling {rows:?}")));
            }
        }
        let rows_ok = rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_ok = rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(below, above)| below > above));
        if !rows_ok || !cols_ok {
            return Err(Error::InvalidParameter(format!("{rows:?} is not standard")));
        }
        Ok(Tableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Sum of the entries `i` whose successor `i + 1` sits in a strictly lower row.
    pub fn maj(&self) -> u32 {
        let n = self.shape.size();
        let mut row_of = vec![0usize; n + 1];
        for (r, row) in self.rows.iter().enumerate() {
            for &v in row {
                row_of[v as usize] = r;
            }
        }
        (1..n).filter(|&i| row_of[i + 1] > row_of[i]).map(|i| i as u32).sum()
    }
}

pub fn maj_tableau(t: &Tableau) -> u32 {
    t.maj()
}

/// Every standard Young tableau of `shape`, built by placing the largest
/// entry in each outer corner in turn.
pub fn syt_enumerate(shape: &Partition) -> Vec<Tableau> {
    fn rec(lens: &mut Vec<usize>, next: u8, grid: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
        if next == 0 {
            out.push(grid.clone());
            return;
        }
        for r in 0..lens.len() {
            let len = lens[r];
            let is_corner = len > 0 && lens.get(r + 1).is_none_or(|&below| below < len);
            if !is_corner {
                continue;
            }
            grid[r][len - 1] = next;
            lens[r] -= 1;
            rec(lens, next - 1, grid, out);
            lens[r] += 1;
        }
    }
    let mut lens = shape.parts.clone();
    let mut grid: Vec<Vec<u8>> = shape.parts.iter().map(|&l| vec![0; l]).collect();
    let mut fillings = Vec::new();
    rec(&mut lens, shape.size() as u8, &mut grid, &mut fillings);
    assert_eq!(
        fillings.len() as u64,
        shape.hook_length_count(),
        "tableau count disagrees with the hook-length formula for {shape}"
    );
    let mut out: Vec<Tableau> = fillings
        .into_iter()
        .map(|rows| Tableau {
            shape: shape.clone(),
            rows,
        })
        .collect();
    out.sort();
    out
}

/// Histogram of tableau major indices for one shape.
pub fn maj_distribution(shape: &Partition) -> Vec<u64> {
    let n = shape.size();
    let mut hist = vec![0u64; n * n.saturating_sub(1) / 2 + 1];
    for t in syt_enumerate(shape) {
        hist[t.maj() as usize] += 1;
    }
    hist
}

fn fold(hist: &[u64], modulus: usize) -> Vec<u64> {
    let mut out = vec![0u64; modulus];
    for (m, &c) in hist.iter().enumerate() {
        out[m % modulus] += c;
    }
    out
}

/// Number of tableaux of `shape` with major index `≡ i (mod modulus)`.
pub fn f_multiplicity(shape: &Partition, modulus: usize, i: usize) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::InvalidParameter("modulus must be >= 1".into()));
    }
    Ok(fold(&maj_distribution(shape), modulus)[i % modulus])
}

/// `Σ_λ f^λ_{k,i} f^λ_{l,j}` as a `k × l` matrix.
pub fn joint_matrix_syt(n: usize, k: usize, l: usize) -> Result<ResidueMatrix> {
    if n == 0 || k == 0 || l == 0 {
        return Err(Error::InvalidParameter("need n, k, l >= 1".into()));
    }
    if n > SYT_LIMIT {
        return Err(Error::SizeLimit { n, limit: SYT_LIMIT });
    }
    let mut acc = vec![vec![0u64; l]; k];
    for shape in partitions(n) {
        let hist = maj_distribution(&shape);
        let (rows, cols) = (fold(&hist, k), fold(&hist, l));
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in cols.iter().enumerate() {
                acc[i][j] += a * b;
            }
        }
    }
    let rows = acc
        .into_iter()
        .map(|r| r.into_iter().map(BigUint::from).collect())
        .collect();
    ResidueMatrix::new(n, k, l, StatPair::MajImaj, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(1), vec![shape(&[1])]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(9).len(), 30);
        assert_eq!(partitions(12).len(), 77);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn syt_counts() {
        assert_eq!(syt_enumerate(&shape(&[5])).len(), 1);
        assert_eq!(syt_enumerate(&shape(&[2, 2])).len(), 2);
        assert_eq!(syt_enumerate(&shape(&[3, 2])).len(), 5);
        for t in syt_enumerate(&shape(&[3, 2, 1])) {
            assert_eq!(Tableau::new(t.rows().to_vec()).unwrap(), t);
        }
    }

    #[test]
    fn squared_counts_sum_to_factorial() {
        for n in 1..=10usize {
            let total: u64 = partitions(n)
                .iter()
                .map(|s| s.hook_length_count().pow(2))
                .sum();
            assert_eq!(total, (1..=n as u64).product::<u64>());
        }
    }

    #[test]
    fn tableau_maj_examples() {
        assert_eq!(Tableau::new(vec![vec![1, 2, 3, 4]]).unwrap().maj(), 0);
        let column = Tableau::new((1..=5).map(|v| vec![v]).collect()).unwrap();
        assert_eq!(maj_tableau(&column), 10);
        assert_eq!(Tableau::new(vec![vec![1, 3], vec![2]]).unwrap().maj(), 1);
        assert!(Tableau::new(vec![vec![2, 1]]).is_err());
        assert!(Tableau::new(vec![vec![1, 2], vec![3, 4], vec![5, 6, 7]]).is_err());
        assert!(Tableau::new(vec![vec![2, 3], vec![1]]).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        for m in [1, 4, 7] {
            assert_eq!(f_multiplicity(&shape(&[4]), m, 0).unwrap(), 1);
        }
        assert_eq!(f_multiplicity(&shape(&[4]), 7, 3).unwrap(), 0);
        let hooks: Vec<u64> = (0..3).map(|i| f_multiplicity(&shape(&[2, 1]), 3, i).unwrap()).collect();
        assert_eq!(hooks, vec![0, 1, 1]);
        let s = shape(&[4, 2, 1]);
        let total: u64 = (0..5).map(|i| f_multiplicity(&s, 5, i).unwrap()).sum();
        assert_eq!(total, s.hook_length_count());
    }

    #[test]
    fn joint_matrix_examples() {
        let m = joint_matrix_syt(3, 3, 3).unwrap();
        let want = [[2u32, 0, 0], [0, 1, 1], [0, 1, 1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*m.get(i, j), BigUint::from(want[i][j]));
            }
        }
        let m = joint_matrix_syt(5, 3, 2).unwrap();
        assert!(m.rows().iter().flatten().all(|x| *x == BigUint::from(20u32)));
        assert!(matches!(joint_matrix_syt(13, 2, 2), Err(Error::SizeLimit { .. })));
    }
}
