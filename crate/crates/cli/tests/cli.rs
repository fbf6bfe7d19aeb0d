use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn mspectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mspectra")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn validate_accepts_k() {
    let k = data("K.json");
    let out = mspectra(&["validate", k.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn validate_rejects_a_broken_relation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // d_0 d_0 = 0 fails on a chain x -> y -> z of d_0 arrows.
    std::fs::write(
        &path,
        r#"{"N": 2, "field": "Q", "modules": {"0,0": 1, "0,1": 1, "0,2": 1},
            "diffs": [{"i": 0, "from": [0, 0], "matrix": [["1"]]},
                      {"i": 0, "from": [0, 1], "matrix": [["1"]]}]}"#,
    )
    .unwrap();
    let out = mspectra(&["--format", "json", "validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["valid"], Value::Bool(false));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"N": 2, "field": "Q", "modules": {"0,0": "one"}}"#).unwrap();
    let out = mspectra(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("modules"));
}

#[test]
fn field_mismatch_exits_with_two() {
    let k = data("K.json");
    let out = mspectra(&["--field", "Fp:5", "validate", k.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn zero_to_k_fails_at_the_second_side() {
    let f = data("zero_to_k.json");
    let out = mspectra(&["--format", "json", "we", f.to_str().unwrap(), "-r", "0", "-s", "0", "--certificates"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["schema"], "mspectra-report/1");
    assert_eq!(v["command"], "we");
    let certs = v["certificates"].as_array().unwrap();
    assert!(!certs.is_empty());
    assert!(certs.iter().all(|c| c["side"] == "second"));

    let out = mspectra(&["we", f.to_str().unwrap(), "-r", "0", "-s", "3"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn pages_of_a_witness_object() {
    let dir = tempfile::tempdir().unwrap();
    let out = mspectra(&["zw", "--N", "2", "--k", "1", "--p", "3", "--q", "5", "--window=1:4,3:6"]);
    assert_eq!(code(&out), 0);
    let path = dir.path().join("zw.json");
    std::fs::write(&path, &out.stdout).unwrap();

    let out = mspectra(&["--format", "json", "pages", path.to_str().unwrap(), "--side", "first", "-r", "1"]);
    assert_eq!(code(&out), 0);
    let rows: Vec<(i64, i64, u64)> = json(&out)["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["p"].as_i64().unwrap(), r["q"].as_i64().unwrap(), r["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, vec![(2, 5, 1), (3, 5, 1)]);
}

#[test]
fn basis_lists_normal_words() {
    let out = mspectra(&["--format", "json", "basis", "--N", "2", "--p", "-1", "--q", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["basis"].as_array().unwrap().len(), 1);
}

#[test]
fn suite_is_deterministic() {
    let args = ["--format", "json", "suite", "--seed", "3", "--samples", "2"];
    let a = mspectra(&args);
    let b = mspectra(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], Value::Bool(true));
}

#[test]
fn adjoint_round_trip_on_a_bicomplex() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("sq.json");
    std::fs::write(&sq, r#"{"N": 2, "field": "Q", "modules": {"0,0": 1, "0,1": 1}, "diffs": [{"i": 0, "from": [0, 0], "matrix": [["1"]]}]}"#).unwrap();
    let out = mspectra(&["adjoint", "j", sq.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let jm = dir.path().join("jm.json");
    std::fs::write(&jm, &out.stdout).unwrap();
    assert_eq!(code(&mspectra(&["validate", jm.to_str().unwrap()])), 0);
    let out = mspectra(&["adjoint", "q", jm.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let back: Value = serde_json::from_slice(&out.stdout).unwrap();
    let orig: Value = serde_json::from_str(&std::fs::read_to_string(&sq).unwrap()).unwrap();
    assert_eq!(back["modules"], orig["modules"]);
}

#[test]
fn oracle_agrees_on_random_input() {
    let out = mspectra(&["oracle", "--N", "3", "--samples", "4", "--seed", "11"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}
