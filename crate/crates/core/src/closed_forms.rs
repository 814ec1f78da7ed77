//! Closed forms for `m_n^{n,n}` and its relatives, evaluated exactly.
//!
//! Every quantity here is an integer. Intermediate rationals only appear in
//! the prime-power sum, and each division is checked for exactness; a
//! non-integral result is reported as [`Error::Exactness`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::StatPair;
use crate::pool::Workers;
use crate::residue::{big_factorial, ResidueMatrix};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Euler's totient by trial division.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient is defined for n >= 1");
    let mut n = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `gcd(i mod n, n)` with residue 0 standing for the representative `n`.
pub fn cor_gcd_canonical(i: i64, n: u64) -> u64 {
    assert!(n >= 1);
    let r = i.rem_euclid(n as i64) as u64;
    if r == 0 {
        n
    } else {
        gcd(r, n)
    }
}

fn canonical_gcd_with(i: i64, d: u64) -> u64 {
    // gcd(0, d) = d, which is also gcd(n, d) for d | n.
    let r = i.rem_euclid(d as i64) as u64;
    if r == 0 {
        d
    } else {
        gcd(r, d)
    }
}

/// Divisor-sum formula for `m_n^{n,n}(i, j)`; `i`, `j` are taken mod `n`.
pub fn mnnn(n: u64, i: i64, j: i64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidParameter("mnnn needs n >= 1".into()));
    }
    let mut sum = BigInt::zero();
    for d in divisors(n) {
        let a = d / canonical_gcd_with(i, d);
        let b = d / canonical_gcd_with(j, d);
        let sign = mobius(a) * mobius(b);
        if sign == 0 {
            continue;
        }
        let phi_d = totient(d);
        // a | d and b | d, so φ(a) and φ(b) divide φ(d).
        let term = BigInt::from(d).pow((n / d) as u32)
            * BigInt::from(big_factorial((n / d) as usize))
            * BigInt::from(phi_d / totient(a))
            * BigInt::from(phi_d / totient(b));
        if sign > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let n2 = BigInt::from(n) * BigInt::from(n);
    let (q, rem) = sum.div_rem(&n2);
    if !rem.is_zero() || q.is_negative() {
        return Err(Error::Exactness(format!(
            "divisor sum {sum} for (n, i, j) = ({n}, {i}, {j}) is not a nonnegative multiple of n^2"
        )));
    }
    Ok(q.to_biguint().expect("nonnegative"))
}

/// The full `n × n` matrix from [`mnnn`].
pub fn mnnn_matrix(n: u64) -> Result<ResidueMatrix> {
    let rows = (0..n as i64)
        .map(|i| (0..n as i64).map(|j| mnnn(n, i, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ResidueMatrix::new(n as usize, n as usize, n as usize, StatPair::MajImaj, rows)
}

/// `m_{n+1}^{n,n}(i, j) = m_n^{n,n}(i, j) + (n−1)!`.
pub fn cor_n_plus_1(n: u64, i: i64, j: i64) -> Result<BigUint> {
    Ok(mnnn(n, i, j)? + big_factorial(n as usize - 1))
}

pub fn cor_n_plus_1_matrix(n: u64) -> Result<ResidueMatrix> {
    let base = mnnn_matrix(n)?;
    let shift = ResidueMatrix::constant(
        n as usize + 1,
        n as usize,
        n as usize,
        StatPair::MajImaj,
        big_factorial(n as usize - 1),
    );
    Ok(base.plus(&shift)?.with_n(n as usize + 1))
}

fn exact_div(num: BigInt, den: u64, what: &str) -> Result<BigUint> {
    let (q, r) = num.div_rem(&BigInt::from(den));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Exactness(format!("{what}: {num} / {den} is not a natural number")));
    }
    Ok(q.to_biguint().expect("nonnegative"))
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{p} is not prime")))
    }
}

/// `M_p^{p,p}` in block form, residue class 0 first.
pub fn prime_matrix(p: u64) -> Result<ResidueMatrix> {
    require_prime(p)?;
    let f = BigInt::from(big_factorial(p as usize - 1));
    let pm1 = BigInt::from(p - 1);
    let corner = exact_div(&f + &pm1 * &pm1, p, "corner entry")?;
    let edge = exact_div(&f - &pm1, p, "edge entry")?;
    let inner = exact_div(&f + 1, p, "inner entry")?;
    let rows = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| match (i == 0, j == 0) {
                    (true, true) => corner.clone(),
                    (false, false) => inner.clone(),
                    _ => edge.clone(),
                })
                .collect()
        })
        .collect();
    ResidueMatrix::new(p as usize, p as usize, p as usize, StatPair::MajImaj, rows)
}

/// `M_{p+1}^{p,p} = M_p^{p,p} + (p−1)! J`.
pub fn prime_matrix_plus1(p: u64) -> Result<ResidueMatrix> {
    let base = prime_matrix(p)?;
    let shift = ResidueMatrix::constant(
        p as usize + 1,
        p as usize,
        p as usize,
        StatPair::MajImaj,
        big_factorial(p as usize - 1),
    );
    Ok(base.plus(&shift)?.with_n(p as usize + 1))
}

/// `m_n^{n,n}(p^i, p^j)` for `n = p^r`, `0 ≤ i ≤ j ≤ r`.
///
/// The sum runs over `k = 0..=min(i+1, r)`, i.e. over divisors `p^k` of `n`.
pub fn prime_power_entry(p: u64, r: u32, i: u32, j: u32) -> Result<BigUint> {
    require_prime(p)?;
    if r == 0 || i > j || j > r {
        return Err(Error::InvalidParameter(format!(
            "need r >= 1 and 0 <= i <= j <= r (r = {r}, i = {i}, j = {j})"
        )));
    }
    let pb = BigInt::from(p);
    let mut sum = BigRational::zero();
    for k in 0..=(i + 1).min(r) {
        let cofactor = p.pow(r - k);
        let psi = if k <= i {
            BigRational::one()
        } else if i == j {
            BigRational::new(BigInt::one(), BigInt::from((p - 1) * (p - 1)))
        } else {
            BigRational::new(BigInt::from(-1), BigInt::from(p - 1))
        };
        let phi = BigInt::from(totient(p.pow(k)));
        let term = pb.pow(k * cofactor as u32)
            * BigInt::from(big_factorial(cofactor as usize))
            * &phi
            * &phi;
        sum += BigRational::from_integer(term) * psi;
    }
    let value = sum / BigRational::from_integer(pb.pow(2 * r));
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Exactness(format!(
            "prime-power sum for (p, r, i, j) = ({p}, {r}, {i}, {j}) evaluates to {value}"
        )));
    }
    Ok(value.to_integer().to_biguint().expect("nonnegative"))
}

/// Exponent of `p` in `gcd(a, p^r)` with `a` read mod `p^r` (0 gives `r`).
pub fn gcd_exponent(a: i64, p: u64, r: u32) -> u32 {
    let g = cor_gcd_canonical(a, p.pow(r));
    let mut e = 0;
    let mut g = g;
    while g.is_multiple_of(p) {
        g /= p;
        e += 1;
    }
    e
}

/// The full `p^r × p^r` matrix assembled from [`prime_power_entry`] by gcd class.
pub fn prime_power_matrix(p: u64, r: u32) -> Result<ResidueMatrix> {
    require_prime(p)?;
    let n = p.pow(r);
    let mut cache = std::collections::BTreeMap::new();
    let mut rows = Vec::with_capacity(n as usize);
    for a in 0..n as i64 {
        let mut row = Vec::with_capacity(n as usize);
        for b in 0..n as i64 {
            let (x, y) = (gcd_exponent(a, p, r), gcd_exponent(b, p, r));
            let key = (x.min(y), x.max(y));
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(key) {
                e.insert(prime_power_entry(p, r, key.0, key.1)?);
            }
            row.push(cache[&key].clone());
        }
        rows.push(row);
    }
    ResidueMatrix::new(n as usize, n as usize, n as usize, StatPair::MajImaj, rows)
}

/// Values `q`, `r`, `s` of the block form `[q J₁₁, r J; r J, s J]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub q: BigUint,
    pub r: BigUint,
    pub s: BigUint,
}

impl BlockSpec {
    /// Reads `(q, r, s)` off a `p × p` matrix, failing if the block form does not hold.
    pub fn of_matrix(m: &ResidueMatrix, p: usize) -> Result<BlockSpec> {
        if m.k() != p || m.l() != p || p < 2 {
            return Err(Error::InvalidParameter(format!(
                "expected a {p}x{p} matrix with p >= 2"
            )));
        }
        let q = m.get(0, 0).clone();
        let r = m.get(0, 1).clone();
        let s = m.get(1, 1).clone();
        for i in 0..p {
            for j in 0..p {
                let want = match (i == 0, j == 0) {
                    (true, true) => &q,
                    (false, false) => &s,
                    _ => &r,
                };
                if m.get(i, j) != want {
                    return Err(Error::BlockStructure(format!(
                        "m_{}^{{{p},{p}}}({i},{j}) = {} but the block value is {want}",
                        m.n(),
                        m.get(i, j)
                    )));
                }
            }
        }
        let pm1 = BigUint::from(p - 1);
        let total = &q + 2u32 * &pm1 * &r + &pm1 * &pm1 * &s;
        if total != big_factorial(m.n()) {
            return Err(Error::BlockStructure(format!(
                "q + 2(p-1)r + (p-1)^2 s = {total} differs from {}!",
                m.n()
            )));
        }
        Ok(BlockSpec { q, r, s })
    }
}

/// Block values of `M_{np}^{p,p}` (or `M_{np+1}^{p,p}` when `companion`), by enumeration.
pub fn extract_block_sequences(
    p: u64,
    n: u64,
    companion: bool,
    workers: &Workers,
) -> Result<BlockSpec> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("block sequences start at n = 1".into()));
    }
    let size = (n * p + u64::from(companion)) as usize;
    let m = ResidueMatrix::count_matrix(size, p as usize, p as usize, StatPair::MajImaj, workers)?;
    BlockSpec::of_matrix(&m, p as usize)
}

fn seed(n: usize) -> Result<ResidueMatrix> {
    ResidueMatrix::count_matrix(n, 2, 2, StatPair::MajImaj, &Workers::sequential())
}

/// `b_n = m_n^{2,2}` from the two-step recursions, seeded by enumerating `S_2`, `S_3`.
pub fn b_recursion(n: usize) -> Result<ResidueMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("b_n recursion needs n >= 2".into()));
    }
    let mut cur = seed(if n.is_multiple_of(2) { 2 } else { 3 })?;
    let mut size = cur.n();
    while size < n {
        size += 2;
        let h = (size / 2) as u64;
        let (same, shifted) = if size % 2 == 0 {
            (2 * h * h, 2 * h * (h - 1))
        } else {
            let h = (size as u64 - 1) / 2;
            (2 * h * (h + 1), 2 * h * h)
        };
        cur = step2(&cur, same, shifted, size);
    }
    Ok(cur)
}

/// `out(i, j) = same · m(i, j) + shifted · m(i+1, j)`, indices mod 2.
fn step2(m: &ResidueMatrix, same: u64, shifted: u64, n: usize) -> ResidueMatrix {
    let rows = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| m.get(i, j) * same + m.get((i + 1) % 2, j) * shifted)
                .collect()
        })
        .collect();
    ResidueMatrix::new(n, 2, 2, m.statpair(), rows).expect("2x2")
}

/// Divisor normalizing `b_n` to `c_n`: `2^{h−1} h!` with `h = ⌊n/2⌋`.
pub fn c_divisor(n: usize) -> BigUint {
    let h = n / 2;
    (BigUint::one() << (h - 1)) * big_factorial(h)
}

/// `c_n = b_n / (2^{h−1} h!)`, with every division checked.
pub fn c_matrix(b: &ResidueMatrix) -> Result<ResidueMatrix> {
    let n = b.n();
    if n < 2 || b.k() != 2 || b.l() != 2 {
        return Err(Error::InvalidParameter("c_n needs a 2x2 matrix with n >= 2".into()));
    }
    let div = c_divisor(n);
    let rows = b
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let (q, rem) = x.div_rem(&div);
                    if rem.is_zero() {
                        Ok(q)
                    } else {
                        Err(Error::Exactness(format!("b_{n} entry {x} is not divisible by {div}")))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ResidueMatrix::new(n, 2, 2, b.statpair(), rows)
}

/// `c_n` from its own recursions, seeded by `c_2 = b_2` and `c_3 = b_3`.
pub fn c_recursion(n: usize) -> Result<ResidueMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("c_n recursion needs n >= 2".into()));
    }
    let mut cur = seed(if n.is_multiple_of(2) { 2 } else { 3 })?;
    let mut size = cur.n();
    while size < n {
        size += 2;
        let h = (size / 2) as u64;
        let (same, shifted) = if size % 2 == 0 { (h, h - 1) } else { (h + 1, h) };
        cur = step2(&cur, same, shifted, size);
    }
    Ok(cur)
}
