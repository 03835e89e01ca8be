//! `qbc`: runs the exact verification suites and prints Koornwinder
//! polynomials.
//!
//! Exit codes: 0 when every selected check passes, 1 on an identity failure,
//! 2 on a configuration error, 3 when a check ran out of resamples.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qbc_core::combinat::Partition;
use qbc_core::identities::{self as id, Collapse, VerificationReport};
use qbc_core::koornwinder::compute_koornwinder;
use qbc_core::qops::ParamQuad;
use qbc_core::scalars::{fmt_scalar, Gen};
use qbc_core::{QbcError, Sampler};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

const CAP_M: usize = 4;
const CAP_N: usize = 3;
const CAP_SIZE: usize = 6;
const CAP_ENTRY: i64 = 3;

#[derive(Parser, Debug)]
#[command(name = "qbc", version, about = "Exact checks of BC-type kernel identities and Koornwinder polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run one verification suite, or all of them.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compute a Koornwinder polynomial at a seeded parameter point.
    Koornwinder {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the coefficients on the monomial symmetric basis.
        #[arg(long)]
        print: bool,
    },
    /// Eigenfunction suite for the column and row operators.
    Eigen {
        #[command(flatten)]
        opts: Opts,
        /// Largest |lambda|.
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Cauchy,
    #[value(name = "thm2-2")]
    Thm22,
    CoeffRel,
    Saalschutz,
    TransformBc,
    Summation,
    Milne,
    #[value(name = "lemma3-1")]
    Lemma31,
    TransformC,
    #[value(name = "lemma4-1")]
    Lemma41,
    #[value(name = "lemma4-2")]
    Lemma42,
    #[value(name = "h-d-relation")]
    HDRelation,
    Pieri,
    Duality,
    DualCauchyExpansion,
    All,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Partition or multi-index, comma separated.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Operator order for the coefficient relation.
    #[arg(long)]
    r: Option<usize>,
    /// Row degree, or the length in the base-point change.
    #[arg(long)]
    l: Option<usize>,
    /// Exponent in the specialization t = q^-k.
    #[arg(long)]
    k: Option<usize>,
    /// Falls back to QBC_SEED, then 1.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Largest chain lattice the type BC check may enumerate.
    #[arg(long, default_value_t = 20_000)]
    budget: u128,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

struct ConfigError(String);

type Job = Box<dyn Fn() -> qbc_core::Result<VerificationReport> + Send + Sync>;

/// Entry point shared by the binary and the tests. `argv[0]` is the program name.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::Verify { suite, opts } => verify(suite, &opts),
        Cmd::Eigen { opts, size } => eigen(&opts, size),
        Cmd::Koornwinder { m, lambda, seed, print } => koornwinder(m, &lambda, seed, print),
    };
    match result {
        Ok(code) => code,
        Err(ConfigError(msg)) => {
            eprintln!("qbc: {msg}");
            EXIT_CONFIG
        }
    }
}

fn seed_of(flag: Option<u64>) -> Result<u64, ConfigError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("QBC_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| ConfigError(format!("QBC_SEED is not an unsigned integer: {v:?}"))),
        Err(_) => Ok(1),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<i64>, ConfigError> {
    let s = s.trim().trim_matches(|c| c == '(' || c == ')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<i64>().ok().filter(|&v| v >= 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| ConfigError(format!("--{what} must be a comma-separated list of non-negative integers, got {s:?}")))
}

fn parse_multi(s: &str, what: &str) -> Result<Vec<i64>, ConfigError> {
    let v = parse_list(s, what)?;
    if v.iter().any(|&x| x > CAP_ENTRY) {
        return Err(ConfigError(format!("--{what} entries must be at most {CAP_ENTRY}")));
    }
    Ok(v)
}

fn parse_partition(s: &str) -> Result<Partition, ConfigError> {
    let v = parse_list(s, "lambda")?;
    let parts: Vec<usize> = v.iter().map(|&x| x as usize).collect();
    let p = Partition::new(&parts).map_err(|_| ConfigError(format!("--lambda must be non-increasing, got {s:?}")))?;
    if p.size() > CAP_SIZE {
        return Err(ConfigError(format!("|lambda| must be at most {CAP_SIZE}")));
    }
    Ok(p)
}

fn check_caps(o: &Opts) -> Result<(), ConfigError> {
    if o.m.is_some_and(|m| m > CAP_M) {
        return Err(ConfigError(format!("--m must be at most {CAP_M}")));
    }
    if o.n.is_some_and(|n| n > CAP_N) {
        return Err(ConfigError(format!("--n must be at most {CAP_N}")));
    }
    if o.trials == 0 {
        return Err(ConfigError("--trials must be at least 1".into()));
    }
    if o.jobs == 0 {
        return Err(ConfigError("--jobs must be at least 1".into()));
    }
    Ok(())
}

fn job(f: impl Fn() -> qbc_core::Result<VerificationReport> + Send + Sync + 'static) -> Job {
    Box::new(f)
}

fn default_duality_set() -> Vec<Partition> {
    [&[][..], &[1], &[1, 1], &[2]].iter().map(|p| Partition::new(p).expect("partition")).collect()
}

/// Jobs for one suite: the flag-selected case, or the default cases.
fn plan(suite: Suite, o: &Opts, seed: u64) -> Result<Vec<Job>, ConfigError> {
    let tr = o.trials;
    let explicit_mn = o.m.is_some() || o.n.is_some();
    let (m, n) = (o.m.unwrap_or(2), o.n.unwrap_or(1));
    let mut jobs: Vec<Job> = Vec::new();
    match suite {
        Suite::Cauchy | Suite::Thm22 => {
            let sizes = if explicit_mn { vec![(m, n)] } else { vec![(1, 0), (1, 1), (2, 1), (2, 2)] };
            for (m, n) in sizes {
                jobs.push(if suite == Suite::Cauchy {
                    job(move || id::verify_cauchy_kernel(m, n, seed, tr))
                } else {
                    job(move || id::verify_theorem_2_2(m, n, seed, tr))
                });
            }
        }
        Suite::CoeffRel => {
            let cases = if explicit_mn || o.r.is_some() {
                vec![(o.r.unwrap_or(1), m, n)]
            } else {
                [(2, 1), (2, 2)].iter().flat_map(|&(m, n)| (0..=2).map(move |r| (r, m, n))).collect()
            };
            for (r, m, n) in cases {
                jobs.push(job(move || id::verify_coefficient_relation(r, m, n, seed, tr)));
            }
        }
        Suite::Saalschutz => {
            let ls: Vec<usize> = match o.l {
                Some(l) => vec![l],
                None => (0..=3).collect(),
            };
            for l in ls {
                for same in [false, true] {
                    jobs.push(job(move || id::verify_saalschutz(l, same, seed, tr)));
                }
            }
        }
        Suite::TransformBc => {
            let budget = o.budget;
            let cases = if o.alpha.is_some() || o.beta.is_some() {
                vec![(parse_multi(o.alpha.as_deref().unwrap_or("1"), "alpha")?, parse_multi(o.beta.as_deref().unwrap_or(""), "beta")?)]
            } else {
                vec![(vec![1], vec![1]), (vec![2], vec![1]), (vec![1, 1], vec![1])]
            };
            for (a, b) in cases {
                jobs.push(job(move || id::verify_transform_bc(&a, &b, budget, seed, tr)));
            }
        }
        Suite::Summation => {
            let cases = match &o.alpha {
                Some(a) => vec![parse_multi(a, "alpha")?],
                None => vec![vec![1], vec![2], vec![2, 1]],
            };
            for a in cases {
                jobs.push(job(move || id::verify_summation_n0(&a, seed, tr)));
            }
        }
        Suite::Milne => match &o.lambda {
            Some(l) => {
                let l = parse_multi(l, "lambda")?;
                jobs.push(job(move || id::verify_milne(&l, seed, tr)));
            }
            None => jobs.push(job(move || id::verify_milne_sweep(3, 4, seed, tr))),
        },
        Suite::Lemma31 => {
            let sizes: Vec<usize> = match o.m {
                Some(s) => vec![s],
                None => (0..=3).collect(),
            };
            for s in sizes {
                for side in [Collapse::X, Collapse::Y] {
                    jobs.push(job(move || id::verify_lemma_3_1(side, s, seed, tr)));
                }
            }
        }
        Suite::TransformC => {
            let cases = if o.alpha.is_some() || o.beta.is_some() {
                vec![(parse_multi(o.alpha.as_deref().unwrap_or("1"), "alpha")?, parse_multi(o.beta.as_deref().unwrap_or(""), "beta")?)]
            } else {
                vec![(vec![1], vec![1]), (vec![2, 1], vec![1]), (vec![1, 1], vec![1, 1])]
            };
            for (a, b) in cases {
                jobs.push(job(move || id::verify_transform_c(&a, &b, seed, tr)));
            }
        }
        Suite::Lemma41 => {
            let sizes = if explicit_mn { vec![(m, n)] } else { vec![(1, 1), (2, 1), (2, 2)] };
            for (m, n) in sizes {
                jobs.push(job(move || id::verify_lemma_4_1(m, n, seed, tr)));
            }
        }
        Suite::Lemma42 => {
            let cases = if o.k.is_some() || o.m.is_some() {
                vec![(o.k.unwrap_or(1), o.m.unwrap_or(1))]
            } else {
                vec![(1, 1), (1, 2), (2, 1)]
            };
            for (k, m) in cases {
                jobs.push(job(move || id::verify_lemma_4_2(k, m, seed, tr)));
            }
        }
        Suite::HDRelation => {
            let cases = if explicit_mn || o.l.is_some() {
                vec![(o.l.unwrap_or(1), m, n)]
            } else {
                let mut v = Vec::new();
                for m in 1..=2 {
                    for n in 0..=2 {
                        for l in 0..=n {
                            v.push((l, m, n));
                        }
                    }
                }
                v
            };
            for (l, m, n) in cases {
                jobs.push(job(move || id::verify_h_d_relation(l, m, n, seed, tr)));
            }
        }
        Suite::Pieri => {
            let cases = if o.lambda.is_some() || o.m.is_some() || o.l.is_some() {
                let mu = parse_partition(o.lambda.as_deref().unwrap_or(""))?;
                vec![(mu, o.m.unwrap_or(2), o.l.unwrap_or(1))]
            } else {
                let mut v = Vec::new();
                for mu in [&[][..], &[1], &[1, 1]] {
                    let mu = Partition::new(mu).expect("partition");
                    for m in mu.len().max(1)..=2 {
                        for l in 0..=2 {
                            v.push((mu.clone(), m, l));
                        }
                    }
                }
                v
            };
            for (mu, m, l) in cases {
                jobs.push(job(move || id::verify_pieri(&mu, m, l, seed, tr)));
            }
        }
        Suite::Duality => {
            let m = o.m.unwrap_or(2);
            let set = default_duality_set();
            jobs.push(job(move || id::verify_duality(&set, m, seed, tr)));
        }
        Suite::DualCauchyExpansion => {
            let sizes = if explicit_mn { vec![(m, n)] } else { vec![(1, 1), (2, 1), (1, 2)] };
            for (m, n) in sizes {
                jobs.push(job(move || id::verify_dual_cauchy(m, n, seed, tr)));
            }
        }
        Suite::All => {
            let base = Opts { m: None, n: None, lambda: None, alpha: None, beta: None, r: None, l: None, k: None, ..o.clone() };
            jobs.push(job(move || id::verify_eigen_suite(2, 3, 3, seed, tr)));
            for s in ALL_SUITES {
                jobs.extend(plan(*s, &base, seed)?);
            }
            jobs.push(job(move || id::verify_vanishing(3, 4, 3, seed, tr)));
        }
    }
    Ok(jobs)
}

const ALL_SUITES: &[Suite] = &[
    Suite::Cauchy,
    Suite::Thm22,
    Suite::CoeffRel,
    Suite::Saalschutz,
    Suite::TransformBc,
    Suite::Summation,
    Suite::Milne,
    Suite::Lemma31,
    Suite::TransformC,
    Suite::Lemma41,
    Suite::Lemma42,
    Suite::HDRelation,
    Suite::Pieri,
    Suite::Duality,
    Suite::DualCauchyExpansion,
];

/// Runs jobs on up to `threads` workers; results keep job order.
fn execute(jobs: Vec<Job>, threads: usize) -> Vec<qbc_core::Result<VerificationReport>> {
    let slots: Vec<Mutex<Option<qbc_core::Result<VerificationReport>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..threads.min(jobs.len()).max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = jobs[i]();
                *slots[i].lock().expect("slot") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot").expect("job ran")).collect()
}

fn report_json(r: &VerificationReport) -> Value {
    let points: Vec<Value> = r
        .points
        .iter()
        .map(|pt| Value::Object(pt.iter().map(|(g, v)| (g.clone(), Value::String(v.clone()))).collect::<Map<_, _>>()))
        .collect();
    json!({
        "id": r.id,
        "anchor": r.anchor,
        "sizes": r.sizes,
        "seed": r.seed,
        "trials": r.trials,
        "pass": r.pass,
        "residuals": r.residuals.iter().map(fmt_scalar).collect::<Vec<_>>(),
        "points": points,
        "notes": r.notes,
        "time_ms": r.time_ms as u64,
    })
}

fn error_json(err: &QbcError) -> Value {
    json!({ "id": "error", "pass": false, "error": err.to_string() })
}

fn finish(suite: &str, config: Value, results: Vec<qbc_core::Result<VerificationReport>>, report: Option<&PathBuf>) -> Result<i32, ConfigError> {
    let mut code = EXIT_PASS;
    let mut checks: Vec<(String, Value)> = Vec::new();
    for r in &results {
        match r {
            Ok(rep) => {
                eprintln!("{} {} [{}] {}", if rep.pass { "PASS" } else { "FAIL" }, rep.id, rep.sizes, rep.anchor);
                if !rep.pass && code == EXIT_PASS {
                    code = EXIT_FAIL;
                }
                checks.push((rep.id.clone(), report_json(rep)));
            }
            Err(e) => {
                eprintln!("ERROR {e}");
                let c = match e {
                    QbcError::RetryBudgetExhausted(..) => EXIT_SINGULAR,
                    QbcError::Invalid(_) | QbcError::ChainOverflow(..) | QbcError::OutOfBox(..) => EXIT_CONFIG,
                    _ => EXIT_FAIL,
                };
                code = code.max(c);
                checks.push(("error".into(), error_json(e)));
            }
        }
    }
    checks.sort_by(|a, b| a.0.cmp(&b.0));
    let doc = json!({
        "suite": suite,
        "config": config,
        "checks": checks.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    match report {
        Some(path) => std::fs::write(path, text).map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn config_json(suite: &str, o: &Opts, seed: u64) -> Value {
    json!({
        "suite": suite,
        "m": o.m,
        "n": o.n,
        "lambda": o.lambda,
        "alpha": o.alpha,
        "beta": o.beta,
        "r": o.r,
        "l": o.l,
        "k": o.k,
        "seed": seed,
        "trials": o.trials,
        "budget": o.budget.to_string(),
    })
}

fn verify(suite: Suite, o: &Opts) -> Result<i32, ConfigError> {
    check_caps(o)?;
    let seed = seed_of(o.seed)?;
    let name = suite.to_possible_value().expect("named").get_name().to_string();
    let jobs = plan(suite, o, seed)?;
    let results = execute(jobs, o.jobs);
    finish(&name, config_json(&name, o, seed), results, o.report.as_ref())
}

fn eigen(o: &Opts, size: usize) -> Result<i32, ConfigError> {
    check_caps(o)?;
    if size > CAP_SIZE {
        return Err(ConfigError(format!("--size must be at most {CAP_SIZE}")));
    }
    let m = o.m.unwrap_or(2);
    if m > 3 {
        return Err(ConfigError("eigen suite supports m <= 3".into()));
    }
    let seed = seed_of(o.seed)?;
    let l = o.l.unwrap_or(3);
    let tr = o.trials;
    let results = execute(vec![job(move || id::verify_eigen_suite(m, size, l, seed, tr))], 1);
    finish("eigen", config_json("eigen", o, seed), results, o.report.as_ref())
}

fn koornwinder(m: usize, lambda: &str, seed: Option<u64>, print: bool) -> Result<i32, ConfigError> {
    if m == 0 || m > CAP_M {
        return Err(ConfigError(format!("--m must lie in 1..={CAP_M}")));
    }
    let lam = parse_partition(lambda)?;
    if lam.len() > m {
        return Err(ConfigError(format!("lambda {lam} has more than {m} parts")));
    }
    let seed = seed_of(seed)?;
    let stream = format!("koornwinder|m={m}|{lam}");
    let mut sampler = Sampler::new(seed, &stream);
    let mut interp = Sampler::new(seed, &format!("{stream}|interp"));
    let quad = ParamQuad::standard();
    let found = sampler.generic(|p| Ok((p.clone(), compute_koornwinder(&lam, m, &quad, p, &mut interp)?)));
    let (p, k) = match found {
        Ok(v) => v,
        Err(e) => {
            eprintln!("qbc: {e}");
            return Ok(if matches!(e, QbcError::RetryBudgetExhausted(..)) { EXIT_SINGULAR } else { EXIT_FAIL });
        }
    };
    println!("P_{lam} in {m} variables, {} monomial symmetric terms", k.coeffs.len());
    let roots: Vec<String> = p
        .assignments(&[Gen::A, Gen::B, Gen::C, Gen::D, Gen::Q, Gen::T])
        .into_iter()
        .map(|(g, v)| format!("{g}^(1/4)={v}"))
        .collect();
    println!("at {}", roots.join(" "));
    if print {
        for (mu, c) in &k.coeffs {
            println!("m_{mu}: {}", fmt_scalar(c));
        }
    }
    Ok(EXIT_PASS)
}
