//! Acceptance suite: twelve exact checks, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use majperm::closed_forms::mnnn;
use majperm::verify::{summarize, ParamRanges, Runner};
use majperm::{factorial, ResidueMatrix, StatPair, Workers};

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, Box<dyn Fn(&Workers) -> Check>);

fn main() {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let workers = Workers::new(threads).expect("worker pool");
    let criteria: Vec<Criterion> = vec![
        ("coprime moduli give a constant matrix", secs(10), Box::new(coprime_constant)),
        ("row marginals and prefix-max orbits", secs(5), Box::new(marginals)),
        ("scaling by a common factor d", secs(10), Box::new(common_factor)),
        ("divisor-sum formula for k = l = n", secs(60), Box::new(divisor_sum)),
        ("shuffle set identities", secs(30), Box::new(shuffle_sets)),
        ("f_l and g residue shifts", secs(30), Box::new(shifts)),
        ("prime moduli", secs(60), Box::new(primes)),
        ("prime-power moduli", secs(120), Box::new(prime_powers)),
        ("k = l = 2 recursions up to n = 12", secs(600), Box::new(two_by_two)),
        ("tableau oracle", secs(60), Box::new(tableaux)),
        ("MAJ_IMAJ and INV_IMAJ agree", secs(10), Box::new(equidistribution)),
        ("output independent of thread count", secs(600), Box::new(determinism)),
    ];

    let mut failed = 0;
    for (idx, (name, budget, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check(&workers);
        let elapsed = t.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}): {detail}", idx + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", idx + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ranges(n: [usize; 2]) -> ParamRanges {
    ParamRanges {
        n: Some(n),
        ..Default::default()
    }
}

/// Runs each id and requires at least one pass and no failures.
fn run_ids(workers: &Workers, jobs: &[(&str, ParamRanges)]) -> Check {
    let mut runner = Runner::new(workers);
    let mut parts = Vec::new();
    for (id, r) in jobs {
        let reports = runner.run(id, r).map_err(|e| format!("{id}: {e}"))?;
        let s = summarize(&reports);
        if let Some(bad) = reports.iter().find(|r| r.failed()) {
            return Err(format!(
                "{id}: {} failures, first {:?}: {}",
                s.fail,
                bad.params,
                bad.witness.as_deref().unwrap_or("")
            ));
        }
        if s.pass == 0 {
            return Err(format!("{id}: nothing was checked"));
        }
        parts.push(format!("{id} {} pass/{} skipped", s.pass, s.skipped));
    }
    Ok(parts.join(", "))
}

/// Counts by direct iteration over all permutations (Heap's algorithm) with
/// statistics computed from their definitions.
fn naive_matrix(n: usize, k: usize, l: usize) -> Vec<Vec<u64>> {
    fn stats(w: &[usize]) -> (usize, usize) {
        let maj = (1..w.len()).filter(|&i| w[i - 1] > w[i]).sum();
        let mut pos = vec![0; w.len() + 1];
        for (i, &v) in w.iter().enumerate() {
            pos[v] = i;
        }
        let imaj = (1..w.len()).filter(|&v| pos[v + 1] < pos[v]).sum();
        (maj, imaj)
    }
    let mut out = vec![vec![0u64; l]; k];
    let mut w: Vec<usize> = (1..=n).collect();
    let mut c = vec![0usize; n];
    let (m, im) = stats(&w);
    out[m % k][im % l] += 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                w.swap(0, i);
            } else {
                w.swap(c[i], i);
            }
            let (m, im) = stats(&w);
            out[m % k][im % l] += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn coprime_constant(w: &Workers) -> Check {
    for n in 1..=7 {
        for k in 1..=n {
            for l in 1..=n {
                let m = ResidueMatrix::count_matrix(n, k, l, StatPair::MajImaj, w).map_err(|e| e.to_string())?;
                let naive = naive_matrix(n, k, l);
                for (i, row) in naive.iter().enumerate() {
                    for (j, &x) in row.iter().enumerate() {
                        if *m.get(i, j) != BigUint::from(x) {
                            return Err(format!("enumerator disagrees with direct count at ({n},{k},{l},{i},{j})"));
                        }
                    }
                }
            }
        }
    }
    run_ids(w, &[("thm-main", ranges([1, 8]))])
}

fn marginals(w: &Workers) -> Check {
    run_ids(w, &[("prop-2.1", ranges([1, 8]))])
}

fn common_factor(w: &Workers) -> Check {
    let r = ParamRanges {
        n: Some([1, 8]),
        d: Some([1, 3]),
        ..Default::default()
    };
    run_ids(w, &[("thm-dthm", r)])
}

fn divisor_sum(w: &Workers) -> Check {
    let m = ResidueMatrix::count_matrix(3, 3, 3, StatPair::MajImaj, w).map_err(|e| e.to_string())?;
    for (i, j, want) in [(0, 0, 2u32), (1, 1, 1), (0, 1, 0)] {
        let f = mnnn(3, i, j).map_err(|e| e.to_string())?;
        let got = m.get(i as usize, j as usize);
        if f != BigUint::from(want) || *got != BigUint::from(want) {
            return Err(format!("n = 3 entry ({i},{j}): formula {f}, enumeration {got}, expected {want}"));
        }
    }
    run_ids(w, &[("thm-base", ranges([1, 9]))]).map(|s| format!("{s}; n = 3 hand values match"))
}

fn shuffle_sets(w: &Workers) -> Check {
    let grind = ParamRanges {
        tuples: Some(vec![vec![4, 3, 2], vec![5, 5, 5], vec![6, 3, 3]]),
        ..Default::default()
    };
    let ind = ParamRanges {
        tuples: Some(vec![vec![4, 2], vec![6, 3]]),
        ..Default::default()
    };
    run_ids(w, &[("lem-grind", grind), ("lem-ind", ind)])
}

fn shifts(w: &Workers) -> Check {
    run_ids(w, &[("f_l-shift", ranges([2, 7])), ("g-shift", ranges([2, 7]))])
}

fn primes(w: &Workers) -> Check {
    let prop = ParamRanges {
        n: Some([1, 8]),
        p: Some([2, 7]),
        ..Default::default()
    };
    let thm = ParamRanges {
        n: Some([1, 10]),
        p: Some([2, 5]),
        ..Default::default()
    };
    run_ids(w, &[("prop-prime", prop), ("thm-prime", thm)])
}

fn prime_powers(w: &Workers) -> Check {
    let prop = ParamRanges {
        n: Some([1, 9]),
        p: Some([2, 3]),
        r: Some([2, 3]),
        ..Default::default()
    };
    let thm = ParamRanges {
        tuples: Some(vec![vec![2, 2, 1], vec![2, 2, 2]]),
        ..Default::default()
    };
    run_ids(w, &[("prop-prime-power", prop), ("thm-prime-power", thm)])
}

fn two_by_two(w: &Workers) -> Check {
    let mut runner = Runner::new(w);
    let reports = runner
        .run("thm-p2-items-1-5", &ranges([2, 12]))
        .map_err(|e| e.to_string())?;
    if let Some(bad) = reports.iter().find(|r| r.failed()) {
        return Err(format!("{:?}: {}", bad.params, bad.witness.as_deref().unwrap_or("")));
    }
    let passed_at = |item: i64, n: i64| {
        reports
            .iter()
            .any(|r| r.passed() && r.param("item") == Some(item) && r.param("n") == Some(n))
    };
    for (item, n) in [(1, 8), (2, 12), (3, 12), (4, 12), (5, 12)] {
        if !passed_at(item, n) {
            return Err(format!("item {item} was not checked at n = {n}"));
        }
    }
    let b12 = runner.matrix(12, 2, 2, StatPair::MajImaj).map_err(|e| e.to_string())?;
    if b12.total() != BigUint::from(factorial(12)) {
        return Err("b_12 does not sum to 12!".into());
    }
    let s = summarize(&reports);
    Ok(format!("{} pass/{} skipped; b_12 = {:?} by enumeration and recursion", s.pass, s.skipped, b12.rows()))
}

fn tableaux(w: &Workers) -> Check {
    let r = ParamRanges {
        n: Some([1, 9]),
        formula_n: Some([1, 12]),
        ..Default::default()
    };
    run_ids(w, &[("syt-oracle", r)])
}

fn equidistribution(w: &Workers) -> Check {
    let r = ParamRanges {
        n: Some([1, 8]),
        k: Some([1, 8]),
        l: Some([1, 8]),
        ..Default::default()
    };
    run_ids(w, &[("equidistribution", r)])
}

fn determinism(_: &Workers) -> Check {
    let one = Workers::new(1).map_err(|e| e.to_string())?;
    let eight = Workers::new(8).map_err(|e| e.to_string())?;
    let cases = [(9, 9, 9), (10, 2, 2), (10, 5, 3), (11, 4, 6)];
    for (n, k, l) in cases {
        for sp in [StatPair::MajImaj, StatPair::InvImaj] {
            let a = ResidueMatrix::count_matrix(n, k, l, sp, &one).map_err(|e| e.to_string())?;
            let b = ResidueMatrix::count_matrix(n, k, l, sp, &eight).map_err(|e| e.to_string())?;
            if a.to_json() != b.to_json() || a.to_csv() != b.to_csv() {
                return Err(format!("({n},{k},{l}) {sp}: output differs between 1 and 8 workers"));
            }
        }
    }
    Ok(format!("{} matrices byte-identical at 1 and 8 workers", cases.len() * 2))
}
