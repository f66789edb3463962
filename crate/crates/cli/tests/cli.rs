use serde_json::Value;
use std::process::{Command, Output};

fn gtkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtkit")).args(args).output().expect("gtkit runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn case_ids(v: &Value) -> Vec<(String, f64)> {
    v["cases"]
        .as_array()
        .expect("cases array")
        .iter()
        .map(|c| (c["id"].as_str().unwrap().to_string(), c["residual"].as_f64().unwrap()))
        .collect()
}

#[test]
fn rtt_rank_two_passes() {
    let out = gtkit(&["identities", "--rank", "2", "--suite", "rtt"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cases = case_ids(&v);
    assert_eq!(cases.len(), 48);
    assert!(cases.iter().all(|(_, r)| *r == 0.0));
}

#[test]
fn missing_scheme_file_is_an_error() {
    let out = gtkit(&["kernel", "--rank", "3", "--scheme", "/nonexistent/scheme.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn psi_without_scheme_is_an_error() {
    let out = gtkit(&["psi", "--rank", "3", "--point", "z21=1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"].as_str().unwrap().contains("--scheme"));
}

#[test]
fn manifest_lists_every_suite() {
    let out = gtkit(&["manifest"]);
    assert_eq!(out.status.code(), Some(0));
    let suites = &json(&out)["result"]["suites"];
    for key in ["rtt", "gamma-c", "kernel-gl3", "eigen-gl4", "barnes"] {
        assert!(suites.get(key).is_some(), "{key} missing");
    }
}

#[test]
fn same_seed_same_cases() {
    let args = ["kernel", "--rank", "3", "--samples", "3", "--seed", "7"];
    let a = case_ids(&json(&gtkit(&args)));
    let b = case_ids(&json(&gtkit(&args)));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn gamma_c_random_points() {
    let out = gtkit(&["gamma-c", "--points", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
}
