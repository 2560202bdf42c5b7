use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_phiconvex");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("PHICONVEX_SEED")
        .output()
        .expect("binary runs")
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn stripped_report(path: &Path) -> String {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    phiconvex::cli::strip_timing(&mut v);
    serde_json::to_string(&v).unwrap()
}

const MIXED: &str = r#"[
  {"f": "x^2", "interval": [0, 1], "class": "phi-convex", "task": "falsify",
   "budget": {"grid_per_axis": 15, "restarts": 2}},
  {"f": "sqrt(x)", "interval": [0, 1], "class": "phi-convex", "task": "falsify",
   "budget": {"grid_per_axis": 15, "restarts": 2}},
  {"f": "exp(x)", "interval": [0, 1], "task": "thm-2.13", "budget": {"grid_per_axis": 11}},
  {"f": "sqrt(x)", "interval": [0, 1], "task": "thm-2.6", "budget": {"grid_per_axis": 11, "jensen_instances": 20}}
]"#;

#[test]
fn exit_zero_writes_default_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "mixed.json", MIXED);
    let out = run(&["run", &spec, "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().next().unwrap().contains("verdict"));
    assert!(stdout.contains("no counterexample found"));
    assert!(stdout.contains("falsified"));

    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mixed.report.json")).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 0);
    assert_eq!(report["seed"], 3);
    assert_eq!(report["tasks"].as_array().unwrap().len(), 4);
    assert_eq!(report["tasks"][1]["detail"]["outcome"], "falsified");
    assert_eq!(report["tasks"][2]["status"], "confirmed");
}

#[test]
fn exit_two_on_discrepancy() {
    // a two-point grid cannot see that this f is not quasi-convex, so the
    // premise passes while the integral bound fails
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "d.json",
        r#"{"f": "1.25-(x-0.5)^2", "interval": [0, 1], "task": "thm-2.16",
            "budget": {"grid_per_axis": 2, "restarts": 1, "max_iterations": 1}}"#,
    );
    let out = run(&["run", &spec]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.report.json")).unwrap()).unwrap();
    assert_eq!(report["tasks"][0]["status"], "discrepancy");
}

#[test]
fn exit_one_on_bad_spec_or_failed_task() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_spec(dir.path(), "bad.json", r#"{"f": "x^", "interval": [0, 1], "class": "phi-p", "task": "falsify"}"#);
    let out = run(&["run", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
    assert!(!dir.path().join("bad.report.json").exists());

    let failing = write_spec(
        dir.path(),
        "neg.json",
        r#"{"f": "x-1", "interval": [0, 1], "class": "log-phi-convex", "task": "falsify"}"#,
    );
    let out = run(&["run", &failing]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("neg.report.json")).unwrap()).unwrap();
    assert_eq!(report["tasks"][0]["status"], "error");

    assert_eq!(run(&["run", "/nonexistent/spec.json"]).status.code(), Some(1));
}

#[test]
fn reports_repeat_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "mixed.json", MIXED);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    run(&["run", &spec, "--seed", "11", "--out", a.to_str().unwrap()]);
    run(&["run", &spec, "--seed", "11", "--out", b.to_str().unwrap(), "--parallel"]);
    run(&["run", &spec, "--seed", "12", "--out", c.to_str().unwrap()]);
    assert_eq!(stripped_report(&a), stripped_report(&b));
    assert_ne!(stripped_report(&a), stripped_report(&c));
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "s.json",
        r#"{"f": "x^2", "interval": [0, 1], "class": "phi-p", "task": "falsify", "budget": {"grid_per_axis": 5}}"#,
    );
    let out = Command::new(BIN).args(["run", &spec]).env("PHICONVEX_SEED", "99").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 99);
    assert_eq!(report["tasks"][0]["spec"]["seed"], 99);
}

#[test]
fn catalog_lists_reference_rows() {
    let out = run(&["catalog"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 19);
    assert!(text.contains("log-phi-convex"));

    let json = run(&["catalog", "--json"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert!(v.as_array().unwrap().len() >= 18);
}

#[test]
fn eval_prints_value_or_error() {
    let out = run(&["eval", "exp(x)*2", "--at", "0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2");

    let out = run(&["eval", "-x^2", "--at", "-3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "-9");

    let out = run(&["eval", "sqrt(x)", "--at", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sqrt"));
}
