use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ri")).args(args).output().expect("ri runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_fn(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CHI_QUARTER: &str = "breakpoint,value\n0.25,1\n1,0\n";

#[test]
fn check_profile_reports_power_constants() {
    let o = ri(&["check-profile", "--profile", "power(0.5)", "--grid", "2000"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["profile"], "power(0.5)");
    assert!((v["cond1"]["sup_ratio"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!((v["class_q"]["c"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-6);
    assert_eq!(v["class_q"]["member_q"], true);
}

#[test]
fn eval_norm_and_operator() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fn(dir.path(), "chi.csv", CHI_QUARTER);
    let o = ri(&["eval", "--norm", "Lp:2", "--fn", &f]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), 0.5);
    assert_eq!(v["admissible"], true);

    let o = ri(&["eval", "--op", "SI", "--profile", "power(0.5)", "--fn", &f, "--at", "0.1,0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,value");
    let v: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-12);

    let o = ri(&["eval", "--op", "TI", "--profile", "power(0.5)", "--fn", &f]);
    assert_eq!(stdout(&o).lines().count(), 51);
}

#[test]
fn optimal_modes() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_fn(dir.path(), "one.csv", "breakpoint,value\n1,1\n");
    let o = ri(&["optimal", "--mode", "domain", "--space", "Lp:inf", "--profile", "power(0.5)", "--fn", &one]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);

    let o = ri(&["optimal", "--mode", "target", "--space", "Lp:2", "--profile", "loglog", "--fn", &one]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v["warnings"].as_array().unwrap().is_empty());

    let o = ri(&["optimal", "--mode", "domain", "--space", "Lp:inf", "--profile", "power(1)", "--fn", &one]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = ri(&["verify", "--suite", "core-identities", "--size", "40", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite"], "core-identities");
    assert_eq!(v["runtime_ms"], Value::Null);
    assert!(v["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true));

    let o = ri(&["verify", "--suite", "glz-cases", "--size", "20"]);
    assert_eq!(o.status.code(), Some(1));

    let o = ri(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("core-identities") && err.contains("all"));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_fn(dir.path(), "bad.csv", "breakpoint,value\n0.5,-1\n1,0\n");
    assert_eq!(ri(&["eval", "--norm", "Lp:2", "--fn", &bad]).status.code(), Some(2));
    let f = write_fn(dir.path(), "chi.csv", CHI_QUARTER);
    assert_eq!(ri(&["eval", "--norm", "Lp:", "--fn", &f]).status.code(), Some(2));
    assert_eq!(ri(&["check-profile", "--profile", "power(2)"]).status.code(), Some(2));
}
