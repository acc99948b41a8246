//! Runs every acceptance criterion at full size and prints one line per
//! criterion. Exits nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use fracmod::suite::{criterion_name, run_criterion, SuiteConfig, CRITERIA};

/// Wall-clock budget for one full `verify` run.
const VERIFY_LIMIT_SECS: f64 = 300.0;

fn verify_into(path: &Path) -> Result<(f64, Option<i32>), String> {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_fracmod"))
        .args(["verify", "--seed", "1", "--out"])
        .arg(path)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| format!("cannot launch verify: {e}"))?;
    Ok((start.elapsed().as_secs_f64(), status.code()))
}

/// Two seeded `verify` runs: both finish in budget, with a verdict exit
/// code (0 or 1), and write identical bytes.
fn deterministic_verify() -> (bool, String) {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return (false, format!("tempdir: {e}")),
    };
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let runs = match (verify_into(&a), verify_into(&b)) {
        (Ok(x), Ok(y)) => [x, y],
        (Err(e), _) | (_, Err(e)) => return (false, e),
    };
    let slowest = runs.iter().map(|r| r.0).fold(0.0, f64::max);
    let codes_ok = runs.iter().all(|r| matches!(r.1, Some(0) | Some(1)));
    let same = match (std::fs::read(&a), std::fs::read(&b)) {
        (Ok(x), Ok(y)) => !x.is_empty() && x == y,
        _ => false,
    };
    let pass = slowest < VERIFY_LIMIT_SECS && codes_ok && same;
    let detail = format!(
        "slowest run {slowest:.1} s, exit codes {:?}/{:?}, outputs {}",
        runs[0].1,
        runs[1].1,
        if same { "identical" } else { "differ" }
    );
    (pass, detail)
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for id in 1..=CRITERIA {
        let (pass, detail, secs) = match run_criterion(id, &cfg) {
            Ok(r) => (r.pass, r.detail, r.elapsed_secs),
            Err(e) => (false, format!("error: {e}"), 0.0),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {id:>2} {:<40} {} ({secs:.2} s) {detail}",
            criterion_name(id),
            if pass { "PASS" } else { "FAIL" }
        );
    }
    let (pass, detail) = deterministic_verify();
    failed += usize::from(!pass);
    println!("criterion 11 {:<40} {} {detail}", "deterministic verify run", if pass { "PASS" } else { "FAIL" });
    println!("{} of {} criteria passed", CRITERIA as usize + 1 - failed, CRITERIA + 1);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
