use std::path::PathBuf;
use std::process::{Command, Output};

use lorentz_current::suite::SuiteReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lorentz-current"));
    c.env_remove("LORENTZ_CURRENT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lorentz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = tmp("bogus.json");
    let o = run(&["check", "bogus", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(run(&["rep", "check", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["check", "specfun", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "specfun", "--partition", "0.5,-1"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn specfun_suite_passes() {
    let o = run(&["check", "specfun"]);
    assert_eq!(o.status.code(), Some(0));
    let r: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.pass && r.checks.iter().all(|c| c.residual <= c.tolerance));
}

#[test]
fn failing_tolerance_gives_exit_one() {
    let o = run(&["check", "group", "--tol", "group.cocycle=1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let r: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.failures().map(|c| c.check_id.as_str()).collect::<Vec<_>>(), vec!["group.cocycle"]);
}

#[test]
fn spherical_suite_is_reproducible() {
    let a = run(&["check", "spherical", "--n", "2", "--seed", "3", "--samples", "20000"]);
    let b = run(&["check", "spherical", "--n", "2", "--seed", "3", "--samples", "20000"]);
    let ra: SuiteReport = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: SuiteReport = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(ra.without_timings(), rb.without_timings());
    let c = run(&["check", "spherical", "--seed", "4", "--samples", "20000"]);
    let rc: SuiteReport = serde_json::from_str(&stdout(&c)).unwrap();
    assert_ne!(ra.checks[1].residual, rc.checks[1].residual);
}

#[test]
fn sample_files() {
    let empty = tmp("empty.jsonl");
    let o = run(&["sample", "marginal", "--count", "0", "--out", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&empty).unwrap().len(), 0);

    let a = tmp("a.jsonl");
    let b = tmp("b.jsonl");
    for p in [&a, &b] {
        let o = run(&["sample", "marginal", "--count", "10", "--n", "3", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 10);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["xi"].as_array().unwrap().len(), 2);

    let o = run(&["sample", "process", "--count", "5", "--mass", "1.5", "--eps", "1e-3", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    for l in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(v["truncation_bound"].as_f64().unwrap() > 0.0);
        assert!(v["atoms"].is_array());
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let a = bin().args(["sample", "marginal", "--count", "3"]).env("LORENTZ_CURRENT_SEED", "5").output().unwrap();
    let b = run(&["sample", "marginal", "--count", "3", "--seed", "5"]);
    let c = run(&["sample", "marginal", "--count", "3", "--seed", "6"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn evaluation_commands() {
    let o = run(&["specfun", "eval", "--fn", "V", "--rho", "0.5", "--x", "1"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 2f64.exp()).abs() < 1e-13);
    let o = run(&["specfun", "eval", "--fn", "psi", "--n", "2", "--lambda", "1", "--x", "0.5"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.47507520494890654).abs() < 1e-13);
    assert_eq!(run(&["specfun", "eval", "--fn", "K", "--x", "-1"]).status.code(), Some(2));

    let o = run(&["measure", "density", "--which", "nu", "--n", "2", "--partition", "0.5", "--xi", "1.0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    assert!((v["log_value"].as_f64().unwrap() - 0.5f64.sqrt().ln()).abs() < 1e-14);

    let csv = tmp("k.csv");
    let o = run(&["kernel", "tabulate", "--n", "2", "--lambda", "0.5", "--grid", "0.5:2:4", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("xi,xi_prime,value,err_est\n"));
    assert_eq!(text.lines().count(), 17);
    let bad = tmp("bad.csv");
    let o = run(&["kernel", "tabulate", "--n", "2", "--lambda", "1.5", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!bad.exists());
}

#[test]
fn rep_and_group_commands() {
    let o = run(&["rep", "apply", "--n", "2", "--lambda", "0.5", "--g", "z:1.0|d:2.0", "--grid", "10:8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["re"].as_array().unwrap().len(), 16);
    let o = run(&["rep", "apply", "--n", "2", "--lambda", "0.5", "--g", "s|z:0.5", "--grid", "10:8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["rep", "apply", "--n", "2", "--lambda", "0.5", "--g", "q:1"]).status.code(), Some(2));

    let o = run(&["rep", "check", "--suite", "cocycle"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["group", "check", "--n", "3", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let r: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.checks.iter().any(|c| c.check_id == "group.cocycle"));
}
