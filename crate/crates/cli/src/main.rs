//! `majperm`: residue-class counts of (maj, imaj) over symmetric groups.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use majperm::bijections::{f_l, g_map, prefix_max_orbit};
use majperm::closed_forms::{
    b_recursion, c_matrix, cor_n_plus_1_matrix, gcd, is_prime, mnnn, mnnn_matrix, prime_matrix,
    prime_matrix_plus1, prime_power_entry, prime_power_matrix,
};
use majperm::enumerate::{check_limit, HARD_LIMIT};
use majperm::residue::big_factorial;
use majperm::shuffles::{place, shuffle_gamma, shuffle_plus, wt_gamma, wt_index, GapComposition, IndexSet};
use majperm::syt::joint_matrix_syt;
use majperm::verify::{summarize, ParamRanges, Runner, VerificationReport, THEOREMS};
use majperm::{Error, Permutation, ResidueMatrix, StatPair, Workers};

#[derive(Parser)]
#[command(name = "majperm", version, about = "Joint maj/imaj residue counts over S_n")]
struct Cli {
    /// Output format (default: json, or key=value lines for `stats`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for enumeration.
    #[arg(long, global = true, env = "MAJPERM_THREADS", default_value_t = 1)]
    threads: usize,

    /// Largest n that may be enumerated (at most 14).
    #[arg(long, global = true, env = "MAJPERM_ENUM_LIMIT", default_value_t = 12)]
    limit: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Enum,
    Syt,
    Formula,
}

#[derive(Subcommand)]
enum Command {
    /// maj, inv, imaj and the inverse of a permutation.
    Stats { perm: Permutation },
    /// The k x l count matrix for S_n.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = Method::Enum)]
        method: Method,
        #[arg(long, default_value = "MAJ_IMAJ")]
        statpair: StatPair,
    },
    /// Apply a bijection and show how the residues move.
    #[command(subcommand)]
    Bijection(BijectionCmd),
    /// Shuffles of pi with sigma (sigma is shifted above pi).
    Shuffle {
        #[arg(long)]
        pi: Permutation,
        #[arg(long)]
        sigma: Permutation,
        /// Gap composition, e.g. `2,1`.
        #[arg(long, conflicts_with = "index")]
        gamma: Option<GapComposition>,
        /// Positions of pi, e.g. `2,5`.
        #[arg(long, value_delimiter = ',')]
        index: Option<Vec<usize>>,
    },
    /// Closed-form values.
    #[command(subcommand)]
    Formula(FormulaCmd),
    /// Check a theorem exhaustively over a parameter range.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum BijectionCmd {
    /// Cyclic position shift of the values 1..=l.
    Fl {
        #[arg(long)]
        l: usize,
        perm: Permutation,
    },
    /// f_d applied to the values 1..=kd.
    G {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        perm: Permutation,
    },
    /// Reinsertions of the largest of the first k entries.
    Orbit {
        #[arg(long)]
        k: usize,
        perm: Permutation,
    },
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// Divisor-sum formula for m_n^{n,n}.
    Mnnn {
        #[arg(long)]
        n: u64,
        #[arg(long, requires = "j", allow_hyphen_values = true)]
        i: Option<i64>,
        #[arg(long, requires = "i", allow_hyphen_values = true)]
        j: Option<i64>,
    },
    /// m_{n+1}^{n,n}.
    NPlus1 {
        #[arg(long)]
        n: u64,
    },
    /// m_p^{p,p} (or m_{p+1}^{p,p}) for a prime p.
    Prime {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        plus1: bool,
    },
    /// m_{p^r}^{p^r,p^r}, or one entry at residues (p^i, p^j).
    PrimePower {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        #[arg(long, requires = "j")]
        i: Option<u32>,
        #[arg(long, requires = "i")]
        j: Option<u32>,
    },
    /// b_n = m_n^{2,2} by recursion.
    BRec {
        #[arg(long)]
        n: usize,
        /// Print c_n = b_n / (2^{h-1} h!) instead.
        #[arg(long)]
        c: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem id, or `all`.
    id: Option<String>,
    /// List theorem ids and their default ranges.
    #[arg(long, conflicts_with = "id")]
    list: bool,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    l_min: Option<usize>,
    #[arg(long)]
    l_max: Option<usize>,
    #[arg(long)]
    d_min: Option<usize>,
    #[arg(long)]
    d_max: Option<usize>,
    #[arg(long)]
    p_min: Option<usize>,
    #[arg(long)]
    p_max: Option<usize>,
    #[arg(long)]
    r_min: Option<usize>,
    #[arg(long)]
    r_max: Option<usize>,
    /// Upper n for enumeration-free checks.
    #[arg(long)]
    formula_n_max: Option<usize>,
    /// Report elapsed_ms as 0 so output is byte-comparable.
    #[arg(long)]
    no_timing: bool,
}

enum Failure {
    Usage(String),
    Size(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => Failure::Size(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Size(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if cli.limit > HARD_LIMIT {
        return Err(Failure::Usage(format!("--limit {} exceeds {HARD_LIMIT}", cli.limit)));
    }
    let workers = Workers::new(cli.threads)?;
    let format = cli.format;
    match cli.command {
        Command::Stats { perm } => stats(&perm, format),
        Command::Matrix { n, k, l, method, statpair } => {
            let m = matrix(n, k, l, method, statpair, &workers, cli.limit)?;
            print_matrix(&m, format);
            Ok(())
        }
        Command::Bijection(cmd) => bijection(cmd, format),
        Command::Shuffle { pi, sigma, gamma, index } => shuffle(&pi, &sigma, gamma, index, format),
        Command::Formula(cmd) => formula(cmd, format),
        Command::Verify(args) => verify(args, &workers, cli.limit, format),
    }
}

fn emit(value: &Value, format: Option<Format>) {
    match format {
        Some(Format::Table) => {
            if let Value::Object(map) = value {
                for (k, v) in map {
                    match v {
                        Value::String(s) => println!("{k}={s}"),
                        other => println!("{k}={other}"),
                    }
                }
            } else {
                println!("{value}");
            }
        }
        _ => println!("{}", serde_json::to_string_pretty(value).expect("plain data")),
    }
}

fn print_matrix(m: &ResidueMatrix, format: Option<Format>) {
    match format.unwrap_or(Format::Json) {
        Format::Json => println!("{}", m.to_json()),
        Format::Csv => print!("{}", m.to_csv()),
        Format::Table => print!("{}", m.to_table()),
    }
}

fn stats(p: &Permutation, format: Option<Format>) -> Outcome {
    if matches!(format, None | Some(Format::Table)) {
        let inverse = p.inverse();
        println!("maj={} inv={} imaj={} inverse={inverse}", p.maj(), p.inv(), p.imaj());
        return Ok(());
    }
    let v = json!({
        "perm": p.to_string(),
        "maj": p.maj(),
        "inv": p.inv(),
        "imaj": p.imaj(),
        "inverse": p.inverse().to_string(),
    });
    emit(&v, format);
    Ok(())
}

fn matrix(
    n: usize,
    k: usize,
    l: usize,
    method: Method,
    statpair: StatPair,
    workers: &Workers,
    limit: usize,
) -> Result<ResidueMatrix, Failure> {
    if n == 0 || k == 0 || l == 0 {
        return Err(Failure::Usage("n, k, l must be >= 1".into()));
    }
    let m = match method {
        Method::Enum => {
            check_limit(n, limit)?;
            ResidueMatrix::count_matrix(n, k, l, statpair, workers)?
        }
        Method::Syt => joint_matrix_syt(n, k, l)?.with_statpair(statpair),
        Method::Formula => formula_matrix(n, k, l)?.with_statpair(statpair),
    };
    Ok(m)
}

const FAMILIES: &str = "k = l = n (divisor sum), k = l = n - 1, \
gcd(k, l) = 1 with k, l <= n (constant n!/kl), k = l = 2 (b_n recursion)";

fn formula_matrix(n: usize, k: usize, l: usize) -> Result<ResidueMatrix, Failure> {
    let m = if k == n && l == n {
        mnnn_matrix(n as u64)?
    } else if k == l && n == k + 1 {
        cor_n_plus_1_matrix(k as u64)?
    } else if gcd(k as u64, l as u64) == 1 && k <= n && l <= n {
        let c = big_factorial(n) / (k * l) as u32;
        ResidueMatrix::constant(n, k, l, StatPair::MajImaj, c)
    } else if k == 2 && l == 2 {
        b_recursion(n)?
    } else {
        return Err(Failure::Usage(format!(
            "no closed form covers (n, k, l) = ({n}, {k}, {l}); formulas exist for {FAMILIES}"
        )));
    };
    Ok(m)
}

fn residues(p: &Permutation, inv_mod: usize, imaj_mod: usize) -> Value {
    json!({
        "perm": p.to_string(),
        "inv": p.inv(),
        "imaj": p.imaj(),
        "inv_residue": p.inv() as usize % inv_mod,
        "imaj_residue": p.imaj() as usize % imaj_mod,
    })
}

fn bijection(cmd: BijectionCmd, format: Option<Format>) -> Outcome {
    let v = match cmd {
        BijectionCmd::Fl { l, perm } => {
            let img = f_l(&perm, l)?;
            let n = perm.len();
            json!({
                "map": "f_l",
                "l": l,
                "inv_modulus": n,
                "imaj_modulus": l,
                "input": residues(&perm, n, l),
                "output": residues(&img, n, l),
            })
        }
        BijectionCmd::G { d, k, perm } => {
            let img = g_map(&perm, d, k)?;
            json!({
                "map": "g",
                "d": d,
                "k": k,
                "inv_modulus": k * d,
                "imaj_modulus": d,
                "input": residues(&perm, k * d, d),
                "output": residues(&img, k * d, d),
            })
        }
        BijectionCmd::Orbit { k, perm } => {
            let orbit = prefix_max_orbit(&perm, k)?;
            let members: Vec<Value> = orbit.iter().map(|q| residues(q, k, 1)).collect();
            json!({ "map": "orbit", "k": k, "input": perm.to_string(), "orbit": members })
        }
    };
    if format == Some(Format::Table) {
        print_bijection_table(&v);
    } else {
        emit(&v, format);
    }
    Ok(())
}

fn print_bijection_table(v: &Value) {
    let line = |p: &Value| {
        format!(
            "{}  inv={} (mod {}: {})  imaj={}",
            p["perm"].as_str().unwrap_or_default(),
            p["inv"],
            v.get("inv_modulus").unwrap_or(&v["k"]),
            p["inv_residue"],
            p["imaj"]
        )
    };
    if let Some(orbit) = v["orbit"].as_array() {
        for p in orbit {
            println!("{}", line(p));
        }
    } else {
        println!("{}", line(&v["input"]));
        println!("{}", line(&v["output"]));
    }
}

fn shuffle(
    pi: &Permutation,
    sigma: &Permutation,
    gamma: Option<GapComposition>,
    index: Option<Vec<usize>>,
    format: Option<Format>,
) -> Outcome {
    let n = pi.len() + sigma.len();
    let (perms, weight) = match (gamma, index) {
        (Some(g), _) => {
            let w = wt_gamma(&g, pi.len())?;
            (shuffle_gamma(pi, sigma, &g)?, Some(w))
        }
        (None, Some(positions)) => {
            let set = IndexSet::new(positions, n)?;
            let w = wt_index(&set, pi.len())?;
            (vec![place(pi, sigma, &set)?], Some(w))
        }
        (None, None) => (shuffle_plus(pi, sigma), None),
    };
    if format == Some(Format::Table) {
        if let Some(w) = weight {
            println!("weight={w}");
        }
        for p in &perms {
            println!("{p}  inv={} imaj={}", p.inv(), p.imaj());
        }
        return Ok(());
    }
    let members: Vec<String> = perms.iter().map(Permutation::to_string).collect();
    emit(&json!({ "count": members.len(), "weight": weight, "perms": members }), format);
    Ok(())
}

fn formula(cmd: FormulaCmd, format: Option<Format>) -> Outcome {
    let m = match cmd {
        FormulaCmd::Mnnn { n, i: Some(i), j: Some(j) } => {
            let v = mnnn(n, i, j)?;
            emit(&json!({ "n": n, "i": i, "j": j, "value": v.to_string() }), format);
            return Ok(());
        }
        FormulaCmd::Mnnn { n, .. } => mnnn_matrix(n)?,
        FormulaCmd::NPlus1 { n } => cor_n_plus_1_matrix(n)?,
        FormulaCmd::Prime { p, plus1 } => {
            if !is_prime(p) {
                return Err(Failure::Usage(format!("{p} is not prime")));
            }
            if plus1 {
                prime_matrix_plus1(p)?
            } else {
                prime_matrix(p)?
            }
        }
        FormulaCmd::PrimePower { p, r, i: Some(i), j: Some(j) } => {
            let v = prime_power_entry(p, r, i, j)?;
            emit(&json!({ "p": p, "r": r, "i": i, "j": j, "value": v.to_string() }), format);
            return Ok(());
        }
        FormulaCmd::PrimePower { p, r, .. } => prime_power_matrix(p, r)?,
        FormulaCmd::BRec { n, c } => {
            let b = b_recursion(n)?;
            if c {
                c_matrix(&b)?
            } else {
                b
            }
        }
    };
    print_matrix(&m, format);
    Ok(())
}

fn bounds(lo: Option<usize>, hi: Option<usize>, default: Option<[usize; 2]>) -> Option<[usize; 2]> {
    if lo.is_none() && hi.is_none() {
        return None;
    }
    let [dlo, dhi] = default.unwrap_or([1, HARD_LIMIT]);
    Some([lo.unwrap_or(dlo), hi.unwrap_or(dhi)])
}

fn verify(args: VerifyArgs, workers: &Workers, limit: usize, format: Option<Format>) -> Outcome {
    if args.list {
        for id in THEOREMS {
            let d = ParamRanges::defaults(id)?;
            println!("{id:<18} {}", describe(&d));
        }
        return Ok(());
    }
    let Some(id) = args.id.clone() else {
        return Err(Failure::Usage("verify needs a theorem id (see --list)".into()));
    };
    let ids: Vec<&str> = if id == "all" { THEOREMS.to_vec() } else { vec![id.as_str()] };
    let mut runner = Runner::new(workers).with_limit(limit);
    let mut reports = Vec::new();
    for id in ids {
        let d = ParamRanges::defaults(id)?;
        let overrides = ParamRanges {
            n: bounds(args.n_min, args.n_max, d.n),
            k: bounds(args.k_min, args.k_max, d.k),
            l: bounds(args.l_min, args.l_max, d.l),
            d: bounds(args.d_min, args.d_max, d.d),
            p: bounds(args.p_min, args.p_max, d.p),
            r: bounds(args.r_min, args.r_max, d.r),
            formula_n: bounds(None, args.formula_n_max, d.formula_n),
            tuples: None,
        };
        reports.extend(runner.run(id, &overrides)?);
    }
    if args.no_timing {
        for r in &mut reports {
            r.elapsed = Default::default();
        }
    }
    print_reports(&reports, format);
    let summary = summarize(&reports);
    eprintln!("{} pass, {} fail, {} skipped", summary.pass, summary.fail, summary.skipped);
    if summary.fail > 0 {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn describe(d: &ParamRanges) -> String {
    let mut parts = Vec::new();
    for (name, r) in [("n", d.n), ("k", d.k), ("l", d.l), ("d", d.d), ("p", d.p), ("r", d.r), ("formula_n", d.formula_n)] {
        if let Some([lo, hi]) = r {
            parts.push(format!("{name}={lo}..={hi}"));
        }
    }
    if let Some(t) = &d.tuples {
        parts.push(format!("tuples={t:?}"));
    }
    parts.join(" ")
}

fn print_reports(reports: &[VerificationReport], format: Option<Format>) {
    match format {
        Some(Format::Table) | Some(Format::Csv) => {
            for r in reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let status = serde_json::to_value(r.status).expect("plain data");
                let status = status.as_str().unwrap_or_default().to_uppercase();
                match &r.witness {
                    Some(w) => println!("{status:<7} {} {}  {w}", r.theorem_id, params.join(" ")),
                    None => println!("{status:<7} {} {}", r.theorem_id, params.join(" ")),
                }
            }
        }
        _ => println!("{}", serde_json::to_string_pretty(reports).expect("plain data")),
    }
}
