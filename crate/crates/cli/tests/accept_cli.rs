//! Command-line behaviour: exit codes, config merging, atomic output and
//! report round trips.

use std::process::{Command, Output};

use serde_json::Value;

fn fracmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmod")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn transform_emits_versioned_json() {
    let out = fracmod(&["fracint", "--alpha", "0.5", "--n", "128"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["schema"], 1);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(fracmod(&["fracint", "--alpha", "0.5", "--n", "8"]).status.code(), Some(2));
    assert_eq!(fracmod(&["sweep", "--alpha", "0.5"]).status.code(), Some(2));
    assert_eq!(fracmod(&["fracint", "--dyadic", "5:1"]).status.code(), Some(2));
}

#[test]
fn out_of_domain_parameters_are_numeric_errors() {
    let out = fracmod(&["sweep", "--cmd", "riesz", "--alpha", "0.75", "--p", "1", "--n", "128"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("alpha=0.75") && msg.contains("p=1"), "{msg}");
}

#[test]
fn missing_input_is_io_error() {
    assert_eq!(fracmod(&["report", "--input", "/nonexistent/run.json"]).status.code(), Some(4));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"alpha": [0.25], "n": 64, "f": "power:1"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let file_only = json(&fracmod(&["fracint", "--config", cfg]));
    let overridden = json(&fracmod(&["fracint", "--config", cfg, "--alpha", "0.75"]));
    assert_ne!(file_only, overridden);
    let flags_only = json(&fracmod(&["fracint", "--alpha", "0.75", "--n", "64", "--f", "power:1"]));
    assert_eq!(overridden, flags_only);
}

#[test]
fn out_file_round_trips_through_report() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("sweep.json");
    let run_s = run.to_str().unwrap();
    let out = fracmod(&["sweep", "--cmd", "scaling", "--alpha", "0.5", "--lambda", "2", "--p", "2", "--n", "256", "--out", run_s]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    // only the finished file is left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let again = fracmod(&["report", "--input", run_s]);
    assert_eq!(again.stdout, std::fs::read(&run).unwrap());
    let csv = fracmod(&["report", "--input", run_s, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("name,alpha,p,beta,d,h,lambda,lhs,rhs,ratio,pass"), "{text}");
}

#[test]
fn sweeps_are_seed_stable() {
    let args = ["sweep", "--cmd", "sharpness", "--alpha", "0.5,0.75", "--beta", "0.25", "--n", "1024"];
    let a = fracmod(&args);
    let b = fracmod(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_fracmod"))
        .args(["fracint", "--alpha", "0.5", "--n", "64"])
        .env("FRACMOD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
