//! Named, parameterized checks of the counting identities, run exhaustively.
//!
//! [`Runner::run`] expands a theorem id and a [`ParamRanges`] into parameter
//! tuples and returns one [`VerificationReport`] per tuple, in canonical
//! (sorted) order. Tuples outside a result's hypotheses are reported as
//! skipped rather than passed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::bijections::{f_l, f_l_inverse, g_map, prefix_max_orbit, split};
use crate::closed_forms::{
    b_recursion, c_matrix, c_recursion, cor_gcd_canonical, cor_n_plus_1_matrix, gcd,
    gcd_exponent, is_prime, mnnn, mnnn_matrix, prime_matrix, prime_matrix_plus1,
    prime_power_entry, prime_power_matrix, BlockSpec,
};
use crate::enumerate::{check_limit, factorial, JointDistribution, Permutations, HARD_LIMIT};
use crate::error::{Error, Result};
use crate::perm::{Permutation, StatPair};
use crate::pool::Workers;
use crate::residue::{big_factorial, witness_sets, ResidueMatrix, WITNESS_LIMIT};
use crate::shuffles::{compare_union, inv_between, shuffle_gamma, verify_grind, verify_ind, GapComposition};
use crate::syt::{joint_matrix_syt, partitions, SYT_LIMIT};

/// Every theorem id [`Runner::run`] understands.
pub const THEOREMS: &[&str] = &[
    "prop-2.1",
    "thm-main",
    "lem-grbase",
    "lem-grind",
    "lem-ind",
    "cor-n+1",
    "thm-dthm",
    "eq-mnkeq",
    "eq-grbaseeq",
    "thm-base",
    "cor-gcd",
    "prop-prime",
    "thm-prime",
    "prop-prime-power",
    "thm-prime-power",
    "thm-p2-items-1-5",
    "f_l-shift",
    "g-shift",
    "syt-oracle",
    "equidistribution",
];

const DEFAULTS: &str = include_str!("verify_defaults.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub params: Vec<(String, i64)>,
    pub status: Status,
    /// Counterexample for a failure, or the reason a tuple was skipped.
    pub witness: Option<String>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub(crate) fn from_check(
        id: &str,
        params: Vec<(&str, i64)>,
        witness: Option<String>,
        elapsed: Duration,
    ) -> Self {
        VerificationReport {
            theorem_id: id.to_string(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            status: if witness.is_some() { Status::Fail } else { Status::Pass },
            witness,
            elapsed,
        }
    }

    fn skipped(id: &str, params: Vec<(&str, i64)>, reason: String) -> Self {
        VerificationReport {
            theorem_id: id.to_string(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            status: Status::Skipped,
            witness: Some(reason),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

struct Params<'a>(&'a [(String, i64)]);

impl Serialize for Params<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 5)?;
        st.serialize_field("theorem_id", &self.theorem_id)?;
        st.serialize_field("params", &Params(&self.params))?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("witness", &self.witness)?;
        st.serialize_field("elapsed_ms", &(self.elapsed.as_secs_f64() * 1e3))?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

pub fn summarize(reports: &[VerificationReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skipped => s.skipped += 1,
        }
    }
    s
}

/// Inclusive bounds per parameter; unset fields fall back to per-theorem defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRanges {
    pub n: Option<[usize; 2]>,
    pub k: Option<[usize; 2]>,
    pub l: Option<[usize; 2]>,
    pub d: Option<[usize; 2]>,
    pub p: Option<[usize; 2]>,
    pub r: Option<[usize; 2]>,
    /// Upper range for checks that run without enumerating `S_n`.
    pub formula_n: Option<[usize; 2]>,
    pub tuples: Option<Vec<Vec<usize>>>,
}

impl ParamRanges {
    /// Built-in ranges for `id`.
    pub fn defaults(id: &str) -> Result<ParamRanges> {
        if !THEOREMS.contains(&id) {
            return Err(Error::UnknownTheorem(id.to_string()));
        }
        let table: BTreeMap<String, ParamRanges> =
            toml::from_str(DEFAULTS).expect("embedded defaults parse");
        Ok(table.get(id).cloned().unwrap_or_default())
    }

    /// Fields set in `overrides` replace those in `self`.
    pub fn merged(mut self, overrides: &ParamRanges) -> ParamRanges {
        macro_rules! take {
            ($($f:ident),*) => { $( if overrides.$f.is_some() { self.$f = overrides.$f.clone(); } )* };
        }
        take!(n, k, l, d, p, r, formula_n, tuples);
        // Explicit ranges beat default tuples.
        let ranged = [overrides.n, overrides.k, overrides.l, overrides.d, overrides.p, overrides.r]
            .iter()
            .any(Option::is_some);
        if ranged && overrides.tuples.is_none() {
            self.tuples = None;
        }
        self
    }

    fn range(&self, field: Option<[usize; 2]>, fallback: [usize; 2]) -> std::ops::RangeInclusive<usize> {
        let [lo, hi] = field.unwrap_or(fallback);
        lo..=hi
    }
}

/// Runs theorem checks, caching one joint histogram per `(n, statistic pair)`.
pub struct Runner<'a> {
    workers: &'a Workers,
    limit: usize,
    dists: HashMap<(usize, StatPair), JointDistribution>,
}

impl<'a> Runner<'a> {
    pub fn new(workers: &'a Workers) -> Self {
        Runner {
            workers,
            limit: HARD_LIMIT,
            dists: HashMap::new(),
        }
    }

    /// Caps the largest `S_n` any check may enumerate.
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit.min(HARD_LIMIT);
        self
    }

    pub fn matrix(&mut self, n: usize, k: usize, l: usize, sp: StatPair) -> Result<ResidueMatrix> {
        check_limit(n, self.limit)?;
        if !self.dists.contains_key(&(n, sp)) {
            let dist = self.workers.joint_distribution(n, sp)?;
            self.dists.insert((n, sp), dist);
        }
        ResidueMatrix::from_distribution(&self.dists[&(n, sp)], k, l)
    }

    fn maj(&mut self, n: usize, k: usize, l: usize) -> Result<ResidueMatrix> {
        self.matrix(n, k, l, StatPair::MajImaj)
    }

    /// Runs `id` over `ranges` layered on the built-in defaults.
    pub fn run(&mut self, id: &str, overrides: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let ranges = ParamRanges::defaults(id)?.merged(overrides);
        let mut reports = match id {
            "prop-2.1" => self.prop_marginal(&ranges)?,
            "thm-main" => self.thm_main(&ranges)?,
            "lem-grbase" => self.lem_grbase(&ranges)?,
            "lem-grind" => self.lem_grind(&ranges)?,
            "lem-ind" => self.lem_ind(&ranges)?,
            "cor-n+1" => self.cor_n_plus_1(&ranges)?,
            "thm-dthm" => self.thm_dthm(&ranges)?,
            "eq-mnkeq" => self.eq_mnkeq(&ranges)?,
            "eq-grbaseeq" => self.eq_grbaseeq(&ranges)?,
            "thm-base" => self.thm_base(&ranges)?,
            "cor-gcd" => self.cor_gcd(&ranges)?,
            "prop-prime" => self.prop_prime(&ranges)?,
            "thm-prime" => self.thm_prime(&ranges)?,
            "prop-prime-power" => self.prop_prime_power(&ranges)?,
            "thm-prime-power" => self.thm_prime_power(&ranges)?,
            "thm-p2-items-1-5" => self.thm_p2(&ranges)?,
            "f_l-shift" => self.f_l_shift(&ranges)?,
            "g-shift" => self.g_shift(&ranges)?,
            "syt-oracle" => self.syt_oracle(&ranges)?,
            "equidistribution" => self.equidistribution(&ranges)?,
            other => return Err(Error::UnknownTheorem(other.to_string())),
        };
        reports.sort_by(|a, b| a.params.cmp(&b.params));
        Ok(reports)
    }

    fn prop_marginal(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 8]) {
            for k in rg.range(rg.k, [1, n]) {
                let params = vec![("n", n as i64), ("k", k as i64)];
                if k > n {
                    out.push(VerificationReport::skipped("prop-2.1", params, format!("k = {k} > n = {n}")));
                    continue;
                }
                let t = Instant::now();
                let want = BigUint::from(factorial(n) / k as u64);
                let mut witness = None;
                for sp in [StatPair::MajImaj, StatPair::InvImaj] {
                    let m = self.matrix(n, k, k, sp)?;
                    let marginals = [("row", m.marginal_row()), ("imaj", m.marginal_col())];
                    for (label, v) in marginals {
                        if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| **x != want) {
                            witness.get_or_insert(format!(
                                "{sp} {label} marginal: m_{n}^{k}({i}) = {x}, expected n!/k = {want}"
                            ));
                        }
                    }
                }
                if witness.is_none() {
                    witness = orbit_partition_witness(n, k)?;
                }
                out.push(VerificationReport::from_check("prop-2.1", params, witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn thm_main(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 8]) {
            for k in rg.range(rg.k, [1, n]) {
                for l in rg.range(rg.l, [1, n]) {
                    let params = vec![("n", n as i64), ("k", k as i64), ("l", l as i64)];
                    if gcd(k as u64, l as u64) != 1 {
                        out.push(VerificationReport::skipped("thm-main", params, format!("gcd({k}, {l}) != 1")));
                        continue;
                    }
                    if k > n || l > n {
                        out.push(VerificationReport::skipped("thm-main", params, "needs k, l <= n".into()));
                        continue;
                    }
                    let t = Instant::now();
                    let m = self.maj(n, k, l)?;
                    let want = BigUint::from(factorial(n) / (k * l) as u64);
                    let witness = first_mismatch(&m, |_, _| want.clone(), "n!/kl");
                    out.push(VerificationReport::from_check("thm-main", params, witness, t.elapsed()));
                }
            }
        }
        Ok(out)
    }

    fn lem_grbase(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [2, 8]) {
            for l in rg.range(rg.l, [1, n.saturating_sub(1)]) {
                let params = vec![("n", n as i64), ("l", l as i64)];
                if l == 0 || l >= n || gcd(l as u64, n as u64) != 1 {
                    out.push(VerificationReport::skipped(
                        "lem-grbase",
                        params,
                        format!("needs l < n and gcd(l, n) = 1 (l = {l}, n = {n})"),
                    ));
                    continue;
                }
                let t = Instant::now();
                let m = self.maj(n, n, l)?;
                let want = BigUint::from(factorial(n) / (n * l) as u64);
                let witness = first_mismatch(&m, |_, _| want.clone(), "n!/(nl)");
                out.push(VerificationReport::from_check("lem-grbase", params, witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn lem_grind(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let tuples = match &rg.tuples {
            Some(t) => t.clone(),
            None => {
                let mut t = Vec::new();
                for n in rg.range(rg.n, [1, 5]) {
                    for k in rg.range(rg.k, [1, n]) {
                        for l in rg.range(rg.l, [1, n]) {
                            t.push(vec![n, k, l]);
                        }
                    }
                }
                t
            }
        };
        let mut out = Vec::new();
        for t in tuples {
            let [n, k, l] = tuple::<3>(&t, "(n, k, l)")?;
            check_limit(n, self.limit.min(WITNESS_LIMIT))?;
            if l == 0 || k == 0 || l > n {
                let params = vec![("n", n as i64), ("k", k as i64), ("l", l as i64)];
                out.push(VerificationReport::skipped("lem-grind", params, "needs 1 <= l <= n".into()));
                continue;
            }
            for i in 0..k {
                for j in 0..l {
                    out.push(verify_grind(n, k, l, i, j)?);
                }
            }
        }
        Ok(out)
    }

    fn lem_ind(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let tuples = match &rg.tuples {
            Some(t) => t.clone(),
            None => {
                let mut t = Vec::new();
                for n in rg.range(rg.n, [1, 6]) {
                    for l in rg.range(rg.l, [1, n]) {
                        t.push(vec![n, l]);
                    }
                }
                t
            }
        };
        let mut out = Vec::new();
        for t in tuples {
            let [n, l] = tuple::<2>(&t, "(n, l)")?;
            check_limit(n, self.limit.min(WITNESS_LIMIT))?;
            if l == 0 || l > n {
                let params = vec![("n", n as i64), ("l", l as i64)];
                out.push(VerificationReport::skipped("lem-ind", params, "needs 1 <= l <= n".into()));
                continue;
            }
            for i in 0..l {
                for j in 0..l {
                    out.push(verify_ind(n, l, i, j)?);
                }
            }
        }
        Ok(out)
    }

    fn cor_n_plus_1(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let range = rg.range(rg.n, [1, 8]);
        let top = *range.end();
        for n in range {
            let params = vec![("n", n as i64)];
            if n + 1 > top {
                out.push(VerificationReport::skipped("cor-n+1", params, format!("S_{} is above the range", n + 1)));
                continue;
            }
            let t = Instant::now();
            let brute = self.maj(n + 1, n, n)?;
            let formula = cor_n_plus_1_matrix(n as u64)?;
            let base = self.maj(n, n, n)?;
            let shift = big_factorial(n - 1);
            let witness = first_mismatch(&brute, |i, j| formula.get(i, j).clone(), "mnnn + (n-1)!").or_else(|| {
                first_mismatch(&brute, |i, j| base.get(i, j) + &shift, "enumerated m_n^{n,n} + (n-1)!")
            });
            out.push(VerificationReport::from_check("cor-n+1", params, witness, t.elapsed()));
        }
        Ok(out)
    }

    fn thm_dthm(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 8]) {
            for d in rg.range(rg.d, [1, 3]) {
                if d == 0 || d > n {
                    continue;
                }
                for k in rg.range(rg.k, [1, n / d]) {
                    for l in rg.range(rg.l, [1, n / d]) {
                        let params = vec![("n", n as i64), ("d", d as i64), ("k", k as i64), ("l", l as i64)];
                        if gcd(k as u64, l as u64) != 1 {
                            out.push(VerificationReport::skipped("thm-dthm", params, format!("gcd({k}, {l}) != 1")));
                            continue;
                        }
                        if k.max(l) * d > n || k == 0 || l == 0 {
                            out.push(VerificationReport::skipped("thm-dthm", params, "needs max(k, l) d <= n".into()));
                            continue;
                        }
                        let t = Instant::now();
                        let big = self.maj(n, k * d, l * d)?;
                        let small = self.maj(n, d, d)?;
                        let kl = (k * l) as u32;
                        let witness = first_mismatch_scaled(&big, kl, |i, j| small.get(i % d, j % d).clone(), "m_n^{d,d}(i mod d, j mod d)");
                        out.push(VerificationReport::from_check("thm-dthm", params, witness, t.elapsed()));
                    }
                }
            }
        }
        Ok(out)
    }

    fn eq_mnkeq(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 8]) {
            for d in rg.range(rg.d, [1, 3]) {
                if d == 0 || d > n {
                    continue;
                }
                for k in rg.range(rg.k, [1, n / d]) {
                    let params = vec![("n", n as i64), ("d", d as i64), ("k", k as i64)];
                    if k == 0 || k * d > n {
                        out.push(VerificationReport::skipped("eq-mnkeq", params, "needs kd <= n".into()));
                        continue;
                    }
                    let t = Instant::now();
                    let big = self.maj(n, k * d, d)?;
                    let small = self.maj(n, d, d)?;
                    let witness = first_mismatch_scaled(&big, k as u32, |i, j| small.get(i % d, j).clone(), "m_n^{d,d}(i mod d, j)");
                    out.push(VerificationReport::from_check("eq-mnkeq", params, witness, t.elapsed()));
                }
            }
        }
        Ok(out)
    }

    fn eq_grbaseeq(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let nr = rg.range(rg.n, [1, 9]);
        for d in rg.range(rg.d, [1, 3]) {
            if d == 0 {
                continue;
            }
            for k in rg.range(rg.k, [2, *nr.end() / d]) {
                for l in rg.range(rg.l, [1, k.saturating_sub(1)]) {
                    let n = k * d;
                    let params = vec![("d", d as i64), ("k", k as i64), ("l", l as i64)];
                    if !nr.contains(&n) {
                        continue;
                    }
                    if l == 0 || l >= k || gcd(k as u64, l as u64) != 1 {
                        out.push(VerificationReport::skipped("eq-grbaseeq", params, "needs l < k, gcd(k, l) = 1".into()));
                        continue;
                    }
                    let t = Instant::now();
                    let big = self.maj(n, k * d, l * d)?;
                    let small = self.maj(n, d, d)?;
                    let witness = first_mismatch_scaled(&big, (k * l) as u32, |i, j| small.get(i % d, j % d).clone(), "m_{kd}^{d,d}");
                    out.push(VerificationReport::from_check("eq-grbaseeq", params, witness, t.elapsed()));
                }
            }
        }
        Ok(out)
    }

    fn thm_base(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 9]) {
            let t = Instant::now();
            let brute = self.maj(n, n, n)?;
            let formula = mnnn_matrix(n as u64)?;
            let mut witness = first_mismatch(&brute, |i, j| formula.get(i, j).clone(), "divisor-sum formula");
            if witness.is_none() {
                // Representative n and residue 0 must give the same value.
                for j in 0..n as i64 {
                    let (a, b) = (mnnn(n as u64, 0, j)?, mnnn(n as u64, n as i64, j)?);
                    if a != b {
                        witness = Some(format!("mnnn({n}, 0, {j}) = {a} but mnnn({n}, {n}, {j}) = {b}"));
                        break;
                    }
                }
            }
            out.push(VerificationReport::from_check("thm-base", vec![("n", n as i64)], witness, t.elapsed()));
        }
        Ok(out)
    }

    fn cor_gcd(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let range = rg.range(rg.n, [1, 9]);
        let top = *range.end();
        for n in range {
            for plus in [0usize, 1] {
                let params = vec![("n", n as i64), ("plus", plus as i64)];
                if n + plus > top {
                    continue;
                }
                let t = Instant::now();
                let m = self.maj(n + plus, n, n)?;
                let canon = |i: usize| cor_gcd_canonical(i as i64, n as u64) as usize % n;
                let witness = first_mismatch(&m, |i, j| m.get(canon(i), canon(j)).clone(), "entry at the gcd representatives");
                out.push(VerificationReport::from_check("cor-gcd", params, witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn prop_prime(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let top = *rg.range(rg.n, [1, 8]).end();
        for p in rg.range(rg.p, [2, 7]).filter(|&p| is_prime(p as u64)) {
            for plus in [0usize, 1] {
                if p + plus > top {
                    continue;
                }
                let t = Instant::now();
                let brute = self.maj(p + plus, p, p)?;
                let formula = if plus == 0 { prime_matrix(p as u64)? } else { prime_matrix_plus1(p as u64)? };
                let witness = first_mismatch(&brute, |i, j| formula.get(i, j).clone(), "prime block formula");
                let params = vec![("p", p as i64), ("plus", plus as i64)];
                out.push(VerificationReport::from_check("prop-prime", params, witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn thm_prime(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let top = *rg.range(rg.n, [1, 10]).end();
        for p in rg.range(rg.p, [2, 5]).filter(|&p| is_prime(p as u64)) {
            for mult in 1..=top / p {
                for plus in [0usize, 1] {
                    let size = mult * p + plus;
                    if size > top {
                        continue;
                    }
                    let t = Instant::now();
                    let m = self.maj(size, p, p)?;
                    let witness = BlockSpec::of_matrix(&m, p).err().map(|e| e.to_string());
                    let params = vec![("p", p as i64), ("n", mult as i64), ("plus", plus as i64)];
                    out.push(VerificationReport::from_check("thm-prime", params, witness, t.elapsed()));
                }
            }
        }
        Ok(out)
    }

    fn prop_prime_power(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        let top = *rg.range(rg.n, [1, 9]).end();
        for p in rg.range(rg.p, [2, 3]).filter(|&p| is_prime(p as u64)) {
            for r in rg.range(rg.r, [1, 3]) {
                let n = (p as u64).pow(r as u32) as usize;
                if r == 0 || n > top {
                    continue;
                }
                let t = Instant::now();
                let brute = self.maj(n, n, n)?;
                let mut witness = None;
                'entries: for i in 0..=r as u32 {
                    for j in i..=r as u32 {
                        let (a, b) = (p.pow(i) % n, p.pow(j) % n);
                        let formula = prime_power_entry(p as u64, r as u32, i, j)?;
                        if *brute.get(a, b) != formula {
                            witness = Some(format!(
                                "(p, r, i, j) = ({p}, {r}, {i}, {j}): enumerated m_{n}^{{{n},{n}}}({a},{b}) = {}, formula = {formula}",
                                brute.get(a, b)
                            ));
                            break 'entries;
                        }
                    }
                }
                if witness.is_none() {
                    let full = prime_power_matrix(p as u64, r as u32)?;
                    witness = first_mismatch(&brute, |i, j| full.get(i, j).clone(), "gcd-class assembly");
                }
                let params = vec![("p", p as i64), ("r", r as i64)];
                out.push(VerificationReport::from_check("prop-prime-power", params, witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn thm_prime_power(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let tuples = match &rg.tuples {
            Some(t) => t.clone(),
            None => {
                let mut t = Vec::new();
                let top = *rg.range(rg.n, [1, 9]).end();
                for p in rg.range(rg.p, [2, 3]).filter(|&p| is_prime(p as u64)) {
                    for r in rg.range(rg.r, [1, 3]) {
                        let q = p.pow(r as u32);
                        for mult in 1..=top / q {
                            t.push(vec![p, r, mult]);
                        }
                    }
                }
                t
            }
        };
        let mut out = Vec::new();
        for t in tuples {
            let [p, r, mult] = tuple::<3>(&t, "(p, r, n)")?;
            if !is_prime(p as u64) || r == 0 || mult == 0 {
                return Err(Error::InvalidParameter(format!("bad (p, r, n) = ({p}, {r}, {mult})")));
            }
            let q = p.pow(r as u32);
            for plus in [0usize, 1] {
                let size = mult * q + plus;
                let started = Instant::now();
                let m = self.maj(size, q, q)?;
                let witness = prime_power_block_witness(&m, p as u64, r as u32);
                let params = vec![("p", p as i64), ("r", r as i64), ("n", mult as i64), ("plus", plus as i64)];
                out.push(VerificationReport::from_check("thm-prime-power", params, witness, started.elapsed()));
            }
        }
        Ok(out)
    }

    fn thm_p2(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [2, 10]) {
            if n < 2 {
                continue;
            }
            let params = |item: i64| vec![("item", item), ("n", n as i64)];

            // Item 1: set identity through gap-restricted shuffles.
            if n <= WITNESS_LIMIT.min(self.limit) {
                for i in 0..2 {
                    for j in 0..2 {
                        out.push(p2_set_identity(n, i, j)?);
                    }
                }
            } else {
                out.push(VerificationReport::skipped(
                    "thm-p2-items-1-5",
                    params(1),
                    format!("set identity is materialized only for n <= {WITNESS_LIMIT}"),
                ));
            }

            let t = Instant::now();
            let brute = self.maj(n, 2, 2)?;
            let rec = b_recursion(n)?;
            let witness = first_mismatch(&brute, |i, j| rec.get(i, j).clone(), "b_n recursion");
            out.push(VerificationReport::from_check("thm-p2-items-1-5", params(2), witness, t.elapsed()));

            let t = Instant::now();
            let witness = match c_matrix(&brute) {
                Err(e) => Some(e.to_string()),
                Ok(c) => {
                    let crec = c_recursion(n)?;
                    first_mismatch(&c, |i, j| crec.get(i, j).clone(), "c_n recursion")
                }
            };
            out.push(VerificationReport::from_check("thm-p2-items-1-5", params(3), witness, t.elapsed()));

            let t = Instant::now();
            let witness = first_mismatch(&brute, |i, j| brute.get((i + 1) % 2, (j + 1) % 2).clone(), "b_n(i+1, j+1)");
            out.push(VerificationReport::from_check("thm-p2-items-1-5", params(4), witness, t.elapsed()));

            if n == 2 {
                // b_2 = 2 b_1 is outside the hypothesis (half-size at least 2).
                out.push(VerificationReport::skipped(
                    "thm-p2-items-1-5",
                    params(5),
                    "b_{2h} = 2h b_{2h-1} is stated for h >= 2".into(),
                ));
            } else if n % 2 == 0 {
                let t = Instant::now();
                let prev = self.maj(n - 1, 2, 2)?;
                let witness = first_mismatch(&brute, |i, j| prev.get(i, j) * n as u32, "n b_{n-1}");
                out.push(VerificationReport::from_check("thm-p2-items-1-5", params(5), witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn f_l_shift(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [2, 7]) {
            check_limit(n, self.limit)?;
            for l in rg.range(rg.l, [1, n.saturating_sub(1)]) {
                let params = vec![("n", n as i64), ("l", l as i64)];
                if l == 0 || l >= n {
                    out.push(VerificationReport::skipped("f_l-shift", params, "needs 1 <= l < n".into()));
                    continue;
                }
                let t = Instant::now();
                let witness = f_l_witness(n, l)?;
                out.push(VerificationReport::from_check("f_l-shift", params, witness, t.elapsed()));
            }
        }
        Ok(out)
    }

    fn g_shift(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [2, 7]) {
            check_limit(n, self.limit)?;
            for d in rg.range(rg.d, [1, n / 2]) {
                for k in rg.range(rg.k, [2, n / d.max(1)]) {
                    let params = vec![("n", n as i64), ("d", d as i64), ("k", k as i64)];
                    if d == 0 || k < 2 || k * d > n {
                        out.push(VerificationReport::skipped("g-shift", params, "needs d >= 1, k >= 2, kd <= n".into()));
                        continue;
                    }
                    let t = Instant::now();
                    let witness = g_witness(n, d, k)?;
                    out.push(VerificationReport::from_check("g-shift", params, witness, t.elapsed()));
                }
            }
        }
        Ok(out)
    }

    fn syt_oracle(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 9]) {
            for k in rg.range(rg.k, [1, n]) {
                for l in rg.range(rg.l, [1, n]) {
                    let t = Instant::now();
                    let brute = self.maj(n, k, l)?;
                    let syt = joint_matrix_syt(n, k, l)?;
                    let witness = first_mismatch(&brute, |i, j| syt.get(i, j).clone(), "tableau count");
                    let params = vec![("mode", 0), ("n", n as i64), ("k", k as i64), ("l", l as i64)];
                    out.push(VerificationReport::from_check("syt-oracle", params, witness, t.elapsed()));
                }
            }
        }
        for n in rg.range(rg.formula_n, [1, SYT_LIMIT]) {
            let t = Instant::now();
            let syt = joint_matrix_syt(n, n, n)?;
            let formula = mnnn_matrix(n as u64)?;
            let mut witness = first_mismatch(&syt, |i, j| formula.get(i, j).clone(), "divisor-sum formula");
            let squares: BigUint = partitions(n)
                .iter()
                .map(|s| BigUint::from(s.hook_length_count()).pow(2))
                .sum();
            if witness.is_none() && squares != big_factorial(n) {
                witness = Some(format!("sum of squared tableau counts is {squares}, not {n}!"));
            }
            let params = vec![("mode", 1), ("n", n as i64), ("k", n as i64), ("l", n as i64)];
            out.push(VerificationReport::from_check("syt-oracle", params, witness, t.elapsed()));
        }
        Ok(out)
    }

    fn equidistribution(&mut self, rg: &ParamRanges) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for n in rg.range(rg.n, [1, 8]) {
            for k in rg.range(rg.k, [1, 8]) {
                for l in rg.range(rg.l, [1, 8]) {
                    let t = Instant::now();
                    let a = self.matrix(n, k, l, StatPair::MajImaj)?;
                    let b = self.matrix(n, k, l, StatPair::InvImaj)?;
                    let witness = first_mismatch(&a, |i, j| b.get(i, j).clone(), "INV_IMAJ count");
                    let params = vec![("n", n as i64), ("k", k as i64), ("l", l as i64)];
                    out.push(VerificationReport::from_check("equidistribution", params, witness, t.elapsed()));
                }
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper: a fresh [`Runner`] over `workers`.
pub fn run(id: &str, ranges: &ParamRanges, workers: &Workers) -> Result<Vec<VerificationReport>> {
    Runner::new(workers).run(id, ranges)
}

fn tuple<const N: usize>(t: &[usize], shape: &str) -> Result<[usize; N]> {
    t.try_into()
        .map_err(|_| Error::InvalidParameter(format!("tuple {t:?} does not have the shape {shape}")))
}

fn first_mismatch(
    m: &ResidueMatrix,
    expected: impl Fn(usize, usize) -> BigUint,
    what: &str,
) -> Option<String> {
    first_mismatch_scaled(m, 1, expected, what)
}

/// First `(i, j)` where `scale · m(i, j)` differs from `expected(i, j)`.
fn first_mismatch_scaled(
    m: &ResidueMatrix,
    scale: u32,
    expected: impl Fn(usize, usize) -> BigUint,
    what: &str,
) -> Option<String> {
    for i in 0..m.k() {
        for j in 0..m.l() {
            let got = m.get(i, j) * scale;
            let want = expected(i, j);
            if got != want {
                let lhs = if scale == 1 { "m".to_string() } else { format!("{scale}·m") };
                return Some(format!(
                    "(n, k, l, i, j) = ({}, {}, {}, {i}, {j}): {lhs} = {got}, {what} = {want}",
                    m.n(),
                    m.k(),
                    m.l()
                ));
            }
        }
    }
    None
}

/// Checks that prefix-max orbits of size `k` partition `S_n` and hit every inv residue.
fn orbit_partition_witness(n: usize, k: usize) -> Result<Option<String>> {
    let mut orbits = 0u64;
    for p in Permutations::new(n)? {
        let orbit = prefix_max_orbit(&p, k)?;
        if !orbit.contains(&p) {
            return Ok(Some(format!("(n, k) = ({n}, {k}): {p} is missing from its own orbit")));
        }
        let residues: BTreeSet<u32> = orbit.iter().map(|q| q.inv() % k as u32).collect();
        if residues.len() != k {
            return Ok(Some(format!(
                "(n, k) = ({n}, {k}): orbit of {p} covers inv residues {residues:?} only"
            )));
        }
        for q in &orbit {
            if prefix_max_orbit(q, k)? != orbit {
                return Ok(Some(format!("(n, k) = ({n}, {k}): orbits of {p} and {q} differ")));
            }
        }
        if orbit[0] == p {
            orbits += 1;
        }
    }
    if orbits * k as u64 != factorial(n) {
        return Ok(Some(format!("(n, k) = ({n}, {k}): {orbits} orbits of size {k} do not cover {n}!")));
    }
    Ok(None)
}

fn f_l_witness(n: usize, l: usize) -> Result<Option<String>> {
    let mut image = BTreeSet::new();
    for tau in Permutations::new(n)? {
        let img = f_l(&tau, l)?;
        let (ni, nl) = (n as u32, l as u32);
        if img.inv() % ni != (tau.inv() + nl) % ni {
            return Ok(Some(format!(
                "(n, l) = ({n}, {l}): inv f({tau}) = inv {img} = {}, expected ≡ {} + {l} mod {n}",
                img.inv(),
                tau.inv()
            )));
        }
        if img.imaj() % nl != tau.imaj() % nl {
            return Ok(Some(format!(
                "(n, l) = ({n}, {l}): imaj {img} = {} ≢ imaj {tau} = {} mod {l}",
                img.imaj(),
                tau.imaj()
            )));
        }
        let wrapped = split(&tau, l)?.index.contains(n);
        let before = inv_between(&tau, l) as i64;
        let after = inv_between(&img, l) as i64;
        let want = if wrapped { before - (n - l) as i64 } else { before + l as i64 };
        if after != want {
            return Ok(Some(format!(
                "(n, l) = ({n}, {l}): cross inversions of {tau} -> {img} go {before} -> {after}, expected {want}"
            )));
        }
        if f_l_inverse(&img, l)? != tau {
            return Ok(Some(format!("(n, l) = ({n}, {l}): inverse fails on {tau}")));
        }
        image.insert(img);
    }
    if image.len() as u64 != factorial(n) {
        return Ok(Some(format!("(n, l) = ({n}, {l}): image has {} elements", image.len())));
    }
    Ok(None)
}

fn g_witness(n: usize, d: usize, k: usize) -> Result<Option<String>> {
    let mut image = BTreeSet::new();
    let (kd, du) = ((k * d) as u32, d as u32);
    for tau in Permutations::new(n)? {
        let img = g_map(&tau, d, k)?;
        if img.inv() % kd != (tau.inv() + du) % kd {
            return Ok(Some(format!(
                "(n, d, k) = ({n}, {d}, {k}): inv g({tau}) = inv {img} = {}, expected ≡ {} + {d} mod {kd}",
                img.inv(),
                tau.inv()
            )));
        }
        if img.imaj() % du != tau.imaj() % du {
            return Ok(Some(format!(
                "(n, d, k) = ({n}, {d}, {k}): imaj {img} ≢ imaj {tau} mod {d}"
            )));
        }
        image.insert(img);
    }
    if image.len() as u64 != factorial(n) {
        return Ok(Some(format!("(n, d, k) = ({n}, {d}, {k}): g is not injective")));
    }
    Ok(None)
}

/// Entries of `m_{N}^{q,q}`, `q = p^r`, depend only on gcd classes, and for a
/// fixed row class all strictly larger column classes share one value.
fn prime_power_block_witness(m: &ResidueMatrix, p: u64, r: u32) -> Option<String> {
    let q = m.k();
    let mut by_class: BTreeMap<(u32, u32), (usize, usize)> = BTreeMap::new();
    for a in 0..q {
        for b in 0..q {
            let key = (gcd_exponent(a as i64, p, r), gcd_exponent(b as i64, p, r));
            let (a0, b0) = *by_class.entry(key).or_insert((a, b));
            if m.get(a, b) != m.get(a0, b0) {
                return Some(format!(
                    "(n, k, l) = ({}, {q}, {q}): m({a},{b}) = {} but m({a0},{b0}) = {} in the same gcd class {key:?}",
                    m.n(),
                    m.get(a, b),
                    m.get(a0, b0)
                ));
            }
        }
    }
    for i in 0..=r {
        let reps: Vec<_> = ((i + 1)..=r).map(|j| by_class[&(i, j)]).collect();
        if let Some(w) = reps.windows(2).find(|w| m.get(w[0].0, w[0].1) != m.get(w[1].0, w[1].1)) {
            return Some(format!(
                "(n, k, l) = ({}, {q}, {q}): row class p^{i} has m({},{}) = {} but m({},{}) = {}",
                m.n(),
                w[0].0,
                w[0].1,
                m.get(w[0].0, w[0].1),
                w[1].0,
                w[1].1,
                m.get(w[1].0, w[1].1)
            ));
        }
    }
    None
}

/// `B_n(i, j)` as the four-way disjoint union of gap-restricted shuffles of
/// `12` or `21` with the classes of `B_{n-2}`.
fn p2_set_identity(n: usize, i: usize, j: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let target = &witness_sets(n, 2, 2, StatPair::InvImaj)?[i][j];
    let tail = witness_sets(n - 2, 2, 2, StatPair::InvImaj)?;
    let up: Permutation = "12".parse()?;
    let down: Permutation = "21".parse()?;
    let (i1, j1) = ((i + 1) % 2, (j + 1) % 2);
    let pieces = [
        (&up, true, i, j),
        (&up, false, i1, j),
        (&down, false, i, j1),
        (&down, true, i1, j1),
    ];
    let mut union = Vec::new();
    for (pi, odd, ti, tj) in pieces {
        for g in (1..n).filter(|g| (g % 2 == 1) == odd) {
            let gamma = GapComposition::new(vec![g])?;
            for sigma in &tail[ti][tj] {
                union.extend(shuffle_gamma(pi, sigma, &gamma)?);
            }
        }
    }
    let params = vec![("item", 1), ("n", n as i64), ("i", i as i64), ("j", j as i64)];
    Ok(compare_union("thm-p2-items-1-5", params, union, target, started))
}
