//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn sl2ext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2ext"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn ext_text_output() {
    let out = sl2ext(&["ext", "--p", "3", "--lambda", "1", "--mu", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "delta-delta lambda=1 mu=7  q0:0 q1:1 q2:1\n");
}

#[test]
fn ext_json_output() {
    let out = sl2ext(&["ext", "--p", "3", "--lambda", "1", "--mu", "7", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["family"], "delta-delta");
    assert_eq!(v["p"], 3);
    assert_eq!(v["dims"], serde_json::json!([0, 1, 1]));
}

#[test]
fn ext_csv_output() {
    let out = sl2ext(&["ext", "--p", "3", "--lambda", "1", "--mu", "7", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "lambda,mu,q,dim\n1,7,0,0\n1,7,1,1\n1,7,2,1\n");
}

#[test]
fn ext_max_degree_truncates() {
    let out = sl2ext(&["ext", "--p", "3", "--lambda", "1", "--mu", "7", "--max-degree", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "delta-delta lambda=1 mu=7  q0:0 q1:1\n");
}

#[test]
fn simple_delta_family() {
    let out = sl2ext(&[
        "ext", "--p", "3", "--family", "simple-delta", "--lambda", "3", "--mu", "1",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["dims"], serde_json::json!([0, 1]));
}

#[test]
fn quantum_layer_query() {
    // l=3 over a characteristic-zero base, determinant-balanced pair.
    let out = sl2ext(&[
        "ext", "--p", "3", "--quantum-l", "3", "--lambda", "3", "--lambda2", "3",
        "--mu", "6", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["dims"], serde_json::json!([0, 1, 1]));
}

#[test]
fn unsupported_direction_exits_2() {
    let out = sl2ext(&[
        "ext", "--p", "3", "--family", "nabla-delta", "--lambda", "7", "--mu", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));
}

#[test]
fn malformed_input_exits_1() {
    assert_eq!(sl2ext(&["ext", "--p", "4", "--lambda", "0", "--mu", "0"]).status.code(), Some(1));
    assert_eq!(sl2ext(&["ext", "--p", "3", "--lambda", "x", "--mu", "0"]).status.code(), Some(1));
    assert_eq!(sl2ext(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn table_respects_the_cell_limit() {
    let out = sl2ext(&["table", "--p", "3", "--lambda", "0..200", "--mu", "0..200"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sl2ext(&[
        "table", "--p", "3", "--lambda", "0..2", "--mu", "0..8", "--format", "csv",
    ]);
    assert!(out.status.success());
    // Header plus one row per (lambda, mu, q) triple with a computed entry.
    let text = stdout(&out);
    assert!(text.starts_with("lambda,mu,q,dim\n"));
    assert!(text.contains("0,6,2,1"));
}

#[test]
fn verify_lists_and_runs_suites() {
    let out = sl2ext(&["verify", "--list"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("euler-weyl"));

    let out = sl2ext(&["verify", "--suite", "restricted", "--max-weight", "10"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS restricted"));

    assert_eq!(sl2ext(&["verify", "--suite", "bogus"]).status.code(), Some(1));
}

#[test]
fn cache_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let memo = dir.path().join("memo.jsonl");
    let memo_s = memo.to_str().unwrap();

    let out = sl2ext(&["ext", "--p", "3", "--lambda", "1", "--mu", "7", "--cache", memo_s]);
    assert!(out.status.success());
    assert!(Path::new(memo_s).exists());

    let out = sl2ext(&[
        "ext", "--p", "3", "--lambda", "1", "--mu", "7", "--cache", memo_s, "--paranoid",
    ]);
    assert!(out.status.success());

    let out = sl2ext(&["cache", "validate", memo_s, "--p", "3", "--paranoid"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 skipped"));

    let tampered = std::fs::read_to_string(&memo)
        .unwrap()
        .replace("\"dims\":[0,1", "\"dims\":[0,9");
    std::fs::write(&memo, tampered).unwrap();
    let out = sl2ext(&["cache", "validate", memo_s, "--p", "3", "--paranoid"]);
    assert_eq!(out.status.code(), Some(1));
}
