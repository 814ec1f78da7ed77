//! Exact `k × l` count matrices `m_n^{k,l}`.
//!
//! Rows are residues of the row statistic (`maj` or `inv`) mod `k`, columns
//! residues of `imaj` mod `l`, both 0-based.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::enumerate::{check_limit, factorial, JointDistribution, Permutations, HARD_LIMIT};
use crate::error::{Error, Result};
use crate::perm::{Permutation, StatPair};
use crate::pool::Workers;

/// Largest `n` for which witness sets are materialized.
pub const WITNESS_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    n: usize,
    k: usize,
    l: usize,
    statpair: StatPair,
    rows: Vec<Vec<BigUint>>,
}

/// Both readings of a block decomposition with block size `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub d: usize,
    /// `(k/d) × (l/d)` grid; block `(r, s)` holds entries `(r·d + i', s·d + j')`.
    pub contiguous: Vec<Vec<Vec<Vec<BigUint>>>>,
    /// `d × d` grid; cell `(i', j')` lists every entry `(i, j)` with
    /// `i ≡ i'` and `j ≡ j' (mod d)`, in row-major order.
    pub by_residue: Vec<Vec<Vec<BigUint>>>,
}

impl ResidueMatrix {
    pub fn new(
        n: usize,
        k: usize,
        l: usize,
        statpair: StatPair,
        rows: Vec<Vec<BigUint>>,
    ) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidParameter("moduli must be >= 1".into()));
        }
        if rows.len() != k || rows.iter().any(|r| r.len() != l) {
            return Err(Error::InvalidParameter(format!("matrix is not {k}x{l}")));
        }
        Ok(ResidueMatrix {
            n,
            k,
            l,
            statpair,
            rows,
        })
    }

    pub fn from_distribution(dist: &JointDistribution, k: usize, l: usize) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidParameter("moduli must be >= 1".into()));
        }
        let rows = dist
            .reduce(k, l)
            .into_iter()
            .map(|r| r.into_iter().map(BigUint::from).collect())
            .collect();
        Ok(ResidueMatrix {
            n: dist.n(),
            k,
            l,
            statpair: dist.statpair(),
            rows,
        })
    }

    /// Counts `S_n` by `(row statistic mod k, imaj mod l)`.
    pub fn count_matrix(
        n: usize,
        k: usize,
        l: usize,
        statpair: StatPair,
        workers: &Workers,
    ) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidParameter("moduli must be >= 1".into()));
        }
        let dist = workers.joint_distribution(n, statpair)?;
        Self::from_distribution(&dist, k, l)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn statpair(&self) -> StatPair {
        self.statpair
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.rows[i][j]
    }

    /// Same counts under the other statistic-pair label.
    pub fn with_statpair(mut self, statpair: StatPair) -> Self {
        self.statpair = statpair;
        self
    }

    pub fn total(&self) -> BigUint {
        self.rows.iter().flatten().sum()
    }

    /// Component `i` is `m_n^k(i)`, the number of permutations with row statistic ≡ i.
    pub fn marginal_row(&self) -> Vec<BigUint> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_col(&self) -> Vec<BigUint> {
        (0..self.l)
            .map(|j| self.rows.iter().map(|r| &r[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> ResidueMatrix {
        let rows = (0..self.l)
            .map(|j| (0..self.k).map(|i| self.rows[i][j].clone()).collect())
            .collect();
        ResidueMatrix {
            n: self.n,
            k: self.l,
            l: self.k,
            statpair: self.statpair,
            rows,
        }
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: &BigUint) -> ResidueMatrix {
        let mut out = self.clone();
        for x in out.rows.iter_mut().flatten() {
            *x *= c;
        }
        out
    }

    /// The `k × l` matrix `c · J` with every entry `c`.
    pub fn constant(n: usize, k: usize, l: usize, statpair: StatPair, c: BigUint) -> Self {
        ResidueMatrix {
            n,
            k,
            l,
            statpair,
            rows: vec![vec![c; l]; k],
        }
    }

    /// Entrywise sum; the result keeps `self`'s group size.
    pub fn plus(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        if (self.k, self.l) != (other.k, other.l) {
            return Err(Error::InvalidParameter("matrix shapes differ".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().flatten().zip(other.rows.iter().flatten()) {
            *a += b;
        }
        Ok(out)
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// Entries agree (group size and labels ignored).
    pub fn same_counts(&self, other: &ResidueMatrix) -> bool {
        self.rows == other.rows
    }

    pub fn block_decompose(&self, d: usize) -> Result<BlockDecomposition> {
        if d == 0 || !self.k.is_multiple_of(d) || !self.l.is_multiple_of(d) {
            return Err(Error::Divisibility(format!(
                "block size {d} must divide both k = {} and l = {}",
                self.k, self.l
            )));
        }
        let contiguous = (0..self.k / d)
            .map(|r| {
                (0..self.l / d)
                    .map(|s| {
                        (0..d)
                            .map(|i| (0..d).map(|j| self.rows[r * d + i][s * d + j].clone()).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut by_residue = vec![vec![Vec::new(); d]; d];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                by_residue[i % d][j % d].push(x.clone());
            }
        }
        Ok(BlockDecomposition {
            d,
            contiguous,
            by_residue,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("plain data")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&MatrixJson::from(self)).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: MatrixJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidParameter(format!("matrix JSON: {e}")))?;
        let rows = m
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.parse::<BigUint>()
                            .map_err(|_| Error::InvalidParameter(format!("bad entry `{x}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ResidueMatrix::new(m.n, m.k, m.l, m.statpair, rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.l).map(|j| format!("j={j}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(BigUint::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(BigUint::to_string).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(String::len)
            .chain((0..self.l).map(|j| j.to_string().len()))
            .max()
            .unwrap_or(1);
        let label = self.k.saturating_sub(1).to_string().len().max(3);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "m_{}^{{{},{}}} ({})",
            self.n, self.k, self.l, self.statpair
        );
        let _ = write!(out, "{:>label$} |", "i\\j");
        for j in 0..self.l {
            let _ = write!(out, " {j:>width$}");
        }
        out.push('\n');
        let _ = writeln!(out, "{}", "-".repeat(label + 2 + self.l * (width + 1)));
        for (i, row) in cells.iter().enumerate() {
            let _ = write!(out, "{i:>label$} |");
            for c in row {
                let _ = write!(out, " {c:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    k: usize,
    l: usize,
    statpair: StatPair,
    rows: Vec<Vec<String>>,
}

impl From<&ResidueMatrix> for MatrixJson {
    fn from(m: &ResidueMatrix) -> Self {
        MatrixJson {
            n: m.n,
            k: m.k,
            l: m.l,
            statpair: m.statpair,
            rows: m
                .rows
                .iter()
                .map(|r| r.iter().map(BigUint::to_string).collect())
                .collect(),
        }
    }
}

/// Checks the transpose law `m_n^{k,l}(i,j) = m_n^{l,k}(j,i)` by two enumerations.
pub fn transpose_check(
    n: usize,
    k: usize,
    l: usize,
    statpair: StatPair,
    workers: &Workers,
) -> Result<bool> {
    let a = ResidueMatrix::count_matrix(n, k, l, statpair, workers)?;
    let b = ResidueMatrix::count_matrix(n, l, k, statpair, workers)?;
    Ok(a.same_counts(&b.transpose()))
}

/// `n!` as a big integer.
pub fn big_factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// The sets `M_n^{k,l}(i, j)`, each sorted. `n = 0` gives `{ε}` at `(0, 0)`.
pub fn witness_sets(
    n: usize,
    k: usize,
    l: usize,
    statpair: StatPair,
) -> Result<Vec<Vec<Vec<Permutation>>>> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("moduli must be >= 1".into()));
    }
    check_limit(n, WITNESS_LIMIT.min(HARD_LIMIT))?;
    let mut sets = vec![vec![Vec::new(); l]; k];
    if n == 0 {
        sets[0][0].push(Permutation::empty());
        return Ok(sets);
    }
    for p in Permutations::new(n)? {
        let i = statpair.row_stat(&p) as usize % k;
        let j = p.imaj() as usize % l;
        sets[i][j].push(p);
    }
    debug_assert_eq!(
        sets.iter().flatten().map(Vec::len).sum::<usize>() as u64,
        factorial(n)
    );
    Ok(sets)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, k: usize, l: usize) -> ResidueMatrix {
        ResidueMatrix::count_matrix(n, k, l, StatPair::MajImaj, &Workers::sequential()).unwrap()
    }

    fn big(rows: &[&[u64]]) -> Vec<Vec<BigUint>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigUint::from(x)).collect())
            .collect()
    }

    #[test]
    fn count_matrix_examples() {
        assert_eq!(m(3, 3, 3).rows(), big(&[&[2, 0, 0], &[0, 1, 1], &[0, 1, 1]]));
        assert_eq!(m(3, 3, 2).rows(), big(&[&[1, 1], &[1, 1], &[1, 1]]));
        let one = m(1, 5, 7);
        assert_eq!(one.get(0, 0), &BigUint::one());
        assert_eq!(one.total(), BigUint::one());
    }

    #[test]
    fn marginal_examples() {
        let v = |xs: &[u64]| xs.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        assert_eq!(m(3, 3, 1).marginal_row(), v(&[2, 2, 2]));
        assert_eq!(m(4, 2, 1).marginal_row(), v(&[12, 12]));
        assert_eq!(m(3, 5, 1).marginal_row(), v(&[1, 2, 2, 1, 0]));
    }

    #[test]
    fn transpose_examples() {
        let w = Workers::sequential();
        assert!(transpose_check(4, 2, 3, StatPair::MajImaj, &w).unwrap());
        assert!(transpose_check(5, 5, 5, StatPair::MajImaj, &w).unwrap());
        assert!(transpose_check(1, 1, 1, StatPair::InvImaj, &w).unwrap());
        let a = m(5, 5, 5);
        assert_eq!(a, a.transpose());
    }

    #[test]
    fn block_decompose_examples() {
        // Each residue-class group of m_6^{6,3} is m_6^{3,3}(i', j') / 2.
        let big_m = m(6, 6, 3);
        let small = m(6, 3, 3);
        let blocks = big_m.block_decompose(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let cell = &blocks.by_residue[i][j];
                assert_eq!(cell.len(), 2);
                for x in cell {
                    assert_eq!(x * 2u32, *small.get(i, j));
                }
            }
        }
        assert_eq!(blocks.contiguous.len(), 2);
        assert_eq!(blocks.contiguous[0].len(), 1);

        let whole = m(6, 6, 6).block_decompose(1).unwrap();
        assert_eq!(whole.by_residue[0][0].iter().sum::<BigUint>(), BigUint::from(720u32));
        assert_eq!(whole.contiguous.len(), 6);

        let m4 = m(4, 2, 2);
        let b = m4.block_decompose(2).unwrap();
        assert_eq!(b.contiguous.len(), 1);
        assert_eq!(&b.contiguous[0][0], m4.rows());

        assert!(matches!(m4.block_decompose(3), Err(Error::Divisibility(_))));
        assert!(matches!(m(4, 4, 2).block_decompose(4), Err(Error::Divisibility(_))));
    }

    #[test]
    fn serialization_formats() {
        let a = m(3, 3, 2);
        assert_eq!(
            a.to_json(),
            r#"{"n":3,"k":3,"l":2,"statpair":"MAJ_IMAJ","rows":[["1","1"],["1","1"],["1","1"]]}"#
        );
        assert_eq!(ResidueMatrix::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(a.to_csv(), "j=0,j=1\n1,1\n1,1\n1,1\n");
        assert!(a.to_table().contains("m_3^{3,2}"));
    }

    #[test]
    fn witness_sets_match_counts() {
        let sets = witness_sets(5, 3, 4, StatPair::InvImaj).unwrap();
        let counts = ResidueMatrix::count_matrix(5, 3, 4, StatPair::InvImaj, &Workers::sequential()).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(BigUint::from(sets[i][j].len()), *counts.get(i, j));
            }
        }
        assert_eq!(witness_sets(0, 2, 2, StatPair::InvImaj).unwrap()[0][0], vec![Permutation::empty()]);
        assert!(matches!(witness_sets(9, 2, 2, StatPair::InvImaj), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(ResidueMatrix::count_matrix(3, 0, 1, StatPair::MajImaj, &Workers::sequential()).is_err());
        assert!(matches!(
            ResidueMatrix::count_matrix(15, 2, 2, StatPair::MajImaj, &Workers::sequential()),
            Err(Error::SizeLimit { .. })
        ));
    }
}
