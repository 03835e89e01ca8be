//! Runs every acceptance criterion at exact tolerance and prints one line
//! per criterion. All criteria are evaluated before the test asserts.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::Value;

use qbc_core::identities::{verify_eigen_suite, verify_vanishing, VerificationReport};

fn args(v: &[&str]) -> Vec<String> {
    std::iter::once("qbc").chain(v.iter().copied()).map(String::from).collect()
}

/// Runs `qbc <v> --report <tmp>` and returns the exit code and parsed report.
fn cli(dir: &Path, v: &[&str]) -> (i32, Value) {
    let path = dir.join(format!("report-{}.json", v.join("_").replace(['-', ','], "")));
    let mut a = args(v);
    a.push("--report".into());
    a.push(path.display().to_string());
    let code = qbc_cli::run(&a);
    let report = std::fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str(&t).ok()).unwrap_or(Value::Null);
    (code, report)
}

static NO_CHECKS: Vec<Value> = Vec::new();

fn checks(report: &Value) -> &Vec<Value> {
    report["checks"].as_array().unwrap_or(&NO_CHECKS)
}

/// Exact zero in the `p/q` serialization.
fn is_zero_str(x: &Value) -> bool {
    x.as_str().is_some_and(|s| s.split('/').next() == Some("0"))
}

/// Every check passed and every residual serializes an exact zero.
fn all_zero(report: &Value) -> bool {
    let cs = checks(report);
    !cs.is_empty()
        && cs.iter().all(|c| {
            c["pass"] == Value::Bool(true)
                && c["residuals"].as_array().is_some_and(|r| !r.is_empty() && r.iter().all(is_zero_str))
        })
}

fn ids(report: &Value) -> Vec<String> {
    checks(report).iter().map(|c| format!("{}[{}]", c["id"].as_str().unwrap_or("?"), c["sizes"].as_str().unwrap_or("?"))).collect()
}

fn suite_ok(dir: &Path, v: &[&str], expected: usize, detail: &mut Vec<String>) -> bool {
    let (code, rep) = cli(dir, v);
    let ok = code == 0 && all_zero(&rep) && checks(&rep).len() == expected;
    if !ok {
        detail.push(format!("`{}` exit {code}, checks {:?}", v.join(" "), ids(&rep)));
    }
    ok
}

fn report_ok(r: &qbc_core::Result<VerificationReport>, detail: &mut Vec<String>) -> bool {
    match r {
        Ok(r) if r.pass => true,
        Ok(r) => {
            detail.push(format!("{} [{}]: {} nonzero residuals", r.id, r.sizes, r.nonzero_residuals()));
            false
        }
        Err(e) => {
            detail.push(e.to_string());
            false
        }
    }
}

fn strip_time(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("time_ms");
            m.values_mut().for_each(strip_time);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_time),
        _ => {}
    }
}

struct Outcome {
    n: usize,
    name: &'static str,
    pass: bool,
    elapsed: Duration,
    limit: Duration,
    detail: Vec<String>,
}

fn criterion(n: usize, name: &'static str, limit_s: u64, f: impl FnOnce(&mut Vec<String>) -> bool) -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    let ok = f(&mut detail);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    if elapsed > limit {
        detail.push(format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64()));
    }
    Outcome { n, name, pass: ok && elapsed <= limit, elapsed, limit, detail }
}

#[test]
fn acceptance_criteria() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    let seeds = ["1", "2", "3", "4", "5"];
    let mut out = Vec::new();

    out.push(criterion(1, "eigenfunctions: D_r and H_l on P_lambda, m <= 2, |lambda| <= 3", 60, |d| {
        let r = verify_eigen_suite(2, 3, 3, 1, 5);
        // 4 partitions for m = 1 and 6 for m = 2, five points each
        let enough = r.as_ref().is_ok_and(|r| r.points.len() == 50);
        if !enough {
            d.push("expected 50 evaluation points".into());
        }
        report_ok(&r, d) && enough
    }));

    out.push(criterion(2, "Cauchy kernel identity, 4 sizes x 5 seeds, n = 0 reduction", 30, |d| {
        let mut ok = true;
        for s in seeds {
            ok &= suite_ok(dir, &["verify", "cauchy", "--seed", s], 4, d);
        }
        let (_, rep) = cli(dir, &["verify", "cauchy", "--m", "1", "--n", "0", "--seed", "1"]);
        let first = checks(&rep).first().cloned().unwrap_or(Value::Null);
        let reduction = first["notes"].to_string().contains("n = 0");
        // one kernel residual and one reduction residual per trial
        ok && reduction && first["residuals"].as_array().map(Vec::len) == Some(10)
    }));

    out.push(criterion(3, "explicit base-q kernel identity and the (q,t)-swapped cross-check", 30, |d| {
        let mut ok = true;
        for s in seeds {
            ok &= suite_ok(dir, &["verify", "thm2-2", "--seed", s], 4, d);
        }
        ok
    }));

    out.push(criterion(4, "coefficient relation r <= 2, (m,n) in {(2,1),(2,2)}, KNS at r = 1", 30, |d| {
        let ok = suite_ok(dir, &["verify", "coeff-rel", "--seed", "1"], 6, d);
        let (_, rep) = cli(dir, &["verify", "coeff-rel", "--seed", "1"]);
        let kns = checks(&rep)
            .iter()
            .filter(|c| c["sizes"].as_str().is_some_and(|s| s.starts_with("r=1")))
            .all(|c| c["notes"].to_string().contains("KNS"));
        ok && kns
    }));

    out.push(criterion(5, "type BC transformation at 3 seeds, n = 0 summation", 120, |d| {
        let mut ok = true;
        for s in &seeds[..3] {
            ok &= suite_ok(dir, &["verify", "transform-bc", "--seed", s, "--trials", "1"], 3, d);
        }
        ok & suite_ok(dir, &["verify", "summation", "--seed", "1", "--trials", "2"], 3, d)
    }));

    out.push(criterion(6, "type C transformation at 3 seeds, collapse lemma, Milne's product", 30, |d| {
        let mut ok = true;
        for s in &seeds[..3] {
            ok &= suite_ok(dir, &["verify", "transform-c", "--seed", s, "--trials", "1"], 3, d);
        }
        ok &= suite_ok(dir, &["verify", "lemma3-1", "--seed", "1"], 8, d);
        ok & suite_ok(dir, &["verify", "milne", "--seed", "1"], 1, d)
    }));

    out.push(criterion(7, "eigenvalue ratio over the box, truncated generating function", 30, |d| {
        suite_ok(dir, &["verify", "lemma4-1", "--seed", "1"], 3, d) & suite_ok(dir, &["verify", "lemma4-2", "--seed", "1"], 3, d)
    }));

    out.push(criterion(8, "H-D relation, l <= n <= 2, m <= 2", 60, |d| suite_ok(dir, &["verify", "h-d-relation", "--seed", "1"], 12, d)));

    out.push(criterion(9, "dual Cauchy expansion as a Laurent polynomial identity", 60, |d| {
        suite_ok(dir, &["verify", "dual-cauchy-expansion", "--seed", "1", "--trials", "2"], 3, d)
    }));

    out.push(criterion(10, "duality at 3 points, row Pieri with excluded coefficients zero", 120, |d| {
        let ok = suite_ok(dir, &["verify", "duality", "--seed", "1", "--trials", "3"], 1, d);
        ok & suite_ok(dir, &["verify", "pieri", "--seed", "1", "--trials", "2"], 15, d)
    }));

    out.push(criterion(11, "interpolation vanishing of e_r and h_l with negative controls", 10, |d| {
        report_ok(&verify_vanishing(3, 4, 3, 1, 2), d)
    }));

    out.push(criterion(12, "determinism of `verify all --seed 1`", 600, |d| {
        let run_all = |name: &str| {
            let path = dir.join(name);
            let code = qbc_cli::run(&args(&["verify", "all", "--seed", "1", "--report", &path.display().to_string()]));
            let text = std::fs::read_to_string(&path).unwrap_or_default();
            let mut v: Value = serde_json::from_str(&text).unwrap_or(Value::Null);
            strip_time(&mut v);
            (code, serde_json::to_string_pretty(&v).expect("json"))
        };
        let (c1, a) = run_all("all-1.json");
        let (c2, b) = run_all("all-2.json");
        if c1 != 0 || c2 != 0 {
            d.push(format!("exit codes {c1}, {c2}"));
        }
        if a != b {
            d.push("reports differ".into());
        }
        c1 == 0 && c2 == 0 && a == b
    }));

    // Written to the raw stderr handle so the lines survive output capture.
    let mut err = std::io::stderr().lock();
    for o in &out {
        let _ = writeln!(
            err,
            "criterion {:>2} {}: {} ({:.1}s of {}s){}",
            o.n,
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.elapsed.as_secs_f64(),
            o.limit.as_secs(),
            if o.detail.is_empty() { String::new() } else { format!(" :: {}", o.detail.join("; ")) }
        );
    }
    let failed: Vec<usize> = out.iter().filter(|o| !o.pass).map(|o| o.n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
