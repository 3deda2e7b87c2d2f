use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lengthspec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn characters_pass_and_corruption_is_named() {
    let ok = run(&["verify-characters", "--max-rank", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["passed"], true);
    let bad = run(&["verify-characters", "--max-rank", "3", "--corrupt-n", "4,1,5"]);
    assert_eq!(bad.status.code(), Some(1));
    let failures = json(&bad)["result"]["failures"].to_string();
    assert!(failures.contains("N(4,1)"), "{}", failures);
}

#[test]
fn discriminant_families() {
    let out = run(&["verify-discriminant"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["families"].as_array().unwrap().len(), 14);
    assert_eq!(v["result"]["su_oracle"].as_array().unwrap().len(), 3);

    let fii = run(&["--format", "text", "verify-discriminant", "--family", "FII"]);
    assert_eq!(fii.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&fii.stdout).contains("Spin(7) expansion"));

    let sp = run(&["verify-discriminant", "--family", "Sp", "--n", "2"]);
    assert_eq!(sp.status.code(), Some(0));
    let warnings = &json(&sp)["result"]["families"][0]["warnings"];
    assert_eq!(warnings.as_array().unwrap().len(), 1);

    assert_eq!(run(&["verify-discriminant", "--family", "G2"]).status.code(), Some(2));
    assert_eq!(run(&["verify-discriminant", "--family", "SU", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn splitting_commands() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let out = run(&["splitting", "--p", "3", "--ring", "gaussian", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["census"]["order"], 262_440);
    assert_eq!(v["result"]["gassmann"], false);
    assert_eq!(v["result"]["lmnr"], true);
    let rows = fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("type,chi_b1,chi_b2"));
    assert_eq!(rows.lines().count(), 7);

    assert_eq!(run(&["splitting", "--p", "2"]).status.code(), Some(2));
    assert_eq!(run(&["splitting", "--p", "5", "--ring", "rational"]).status.code(), Some(0));
    assert_eq!(run(&["splitting", "--p", "7", "--ring", "gaussian"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_lengthspec"))
        .args(["splitting", "--p", "3", "--ring", "rational"])
        .env("LENGTHSPEC_GROUP_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let csv = dir.path().join("rows.csv");
    let args = ["simulate", "--p", "3", "--T", "7", "--seed", "42"];
    let first = run(&[&args[..], &["--output", a.to_str().unwrap(), "--csv", csv.to_str().unwrap()]].concat());
    let second = run(&[&args[..], &["--output", b.to_str().unwrap()]].concat());
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let v = json(&first);
    assert_eq!(v["manifest"]["config"]["seed"], 42);
    assert_eq!(v["manifest"]["identity_checks"]["diff_exact"], true);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("length,m1,m2"));

    let other = run(&["simulate", "--p", "3", "--T", "7", "--seed", "43"]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn simulate_collisions_and_errors() {
    let out = run(&["simulate", "--p", "3", "--T", "5", "--seed", "1", "--collisions"]);
    let v = json(&out);
    assert_eq!(v["manifest"]["config"]["collision_rate"], 0.05);
    assert_eq!(v["manifest"]["identity_checks"]["diff_exact"], true);
    assert_eq!(v["manifest"]["identity_checks"]["piqr_exact"], true);
    assert_eq!(run(&["simulate", "--p", "3", "--T", "0", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--p", "3", "--T", "30", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--p", "3", "--T", "5"]).status.code(), Some(2));
    let strict = run(&["simulate", "--p", "3", "--T", "7", "--seed", "42", "--slack", "0.5"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn gassmann_commands() {
    let out = run(&["gassmann"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["triple"]["gassmann"], false);
    assert_eq!(v["result"]["triple"]["lmnr"], true);
    assert_eq!(v["result"]["triple"]["degree_one_reduction"], true);

    let same = json(&run(&["gassmann", "--builtin", "same"]));
    assert!(same["result"]["triple"]["s_bad_sizes"].as_object().unwrap().values().all(|s| s == 0));

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("s3.json");
    fs::write(&good, r#"{"degree": 3, "generators": [[1,2,0],[1,0,2]], "b1": {"stabilizer": 0}, "b2": {"stabilizer": 1}}"#).unwrap();
    let out = run(&["gassmann", "--file", good.to_str().unwrap(), "--scan"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["scan"]["subgroups"], 6);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"table": [[0,1],[1,1]], "b1": {}, "b2": {}}"#).unwrap();
    assert_eq!(run(&["gassmann", "--file", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["gassmann", "--file", "/nonexistent/group.json"]).status.code(), Some(2));
}
