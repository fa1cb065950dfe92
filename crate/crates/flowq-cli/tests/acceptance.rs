//! Acceptance checks for the command-line interface: output schema, exit
//! codes, and bitwise thread-count determinism. PASS lines are visible with
//! `cargo test -- --nocapture`.

use std::io::Write;
use std::process::{Command, Output};

fn flowq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Identical result bytes regardless of worker-thread count: the chunked
/// accumulators merge in a fixed order, so the TSV payload for K_{3,4} at
/// q=5 must match bit for bit between 1 and 8 threads.
#[test]
fn thread_count_determinism_k34_q5() {
    let base = ["stable", "--graph", "k34", "--q", "5", "--format", "tsv"];
    let one = flowq(&[&base[..], &["--threads", "1"]].concat());
    let eight = flowq(&[&base[..], &["--threads", "8"]].concat());
    assert!(one.status.success(), "threads=1 run failed");
    assert!(eight.status.success(), "threads=8 run failed");
    assert_eq!(one.stdout, eight.stdout, "thread count changed the output bytes");
    let text = stdout_str(&one);
    assert!(text.contains("S\t2\t156\n"));
    assert!(text.contains("S\t4\t26636\n"));
    assert!(text.contains("S\t6\t-27580\n"));
    assert!(text.ends_with("flow\t876\n"));
    println!("PASS determinism: k34 q=5 TSV byte-identical at --threads 1 and 8");
}

#[test]
fn json_envelope_schema() {
    let out = flowq(&["flow", "--graph", "k4", "--q", "5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("valid json");
    assert_eq!(v["command"], "flow");
    assert_eq!(v["graph"], "k4");
    assert_eq!(v["q"], 5);
    assert!(v["elapsed_ms"].is_u64());
    assert!(v["version"].is_string());
    assert_eq!(v["results"]["coefficients"], serde_json::json!([-6, 11, -6, 1]));
    assert_eq!(v["results"]["flow"], 24);
    println!("PASS json envelope: command/graph/q/results/elapsed_ms/version present");
}

#[test]
fn stable_tsv_exact_small_case() {
    let out = flowq(&["stable", "--graph", "k3", "--q", "5", "--format", "tsv"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "S\t0\t0\nS\t1\t0\nS\t2\t20\nflow\t4\n");
    println!("PASS stable tsv: one row per rank then a flow row");
}

#[test]
fn stable_json_cross_checks_flow() {
    let out = flowq(&["stable", "--graph", "k33", "--q", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("valid json");
    assert_eq!(v["results"]["flow"], 2);
    assert_eq!(v["results"]["crosscheck"], "ok");
    assert_eq!(v["results"]["s_values"][2], -2);
    assert_eq!(v["results"]["s_values"][4], 12);
    println!("PASS stable json: reassembled flow cross-checked against deletion-contraction");
}

#[test]
fn edge_list_file_and_output_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let edge_path = dir.path().join("single.edges");
    let mut f = std::fs::File::create(&edge_path).unwrap();
    writeln!(f, "# one edge").unwrap();
    writeln!(f, "0 1").unwrap();
    drop(f);
    let out_path = dir.path().join("count.tsv");
    let out = flowq(&[
        "ncount",
        "--edges",
        edge_path.to_str().unwrap(),
        "--q",
        "5",
        "--format",
        "tsv",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "results went to the file, not stdout");
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, "ncount\t4\n");
    println!("PASS file io: --edges input and --output destination");
}

#[test]
fn verify_suite_exit_codes() {
    let ok = flowq(&["verify", "--suite", "delta", "--q", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let guard = flowq(&["verify", "--suite", "k3", "--q", "25"]);
    assert_eq!(guard.status.code(), Some(3), "triangle check above its field bound");
    let unknown = flowq(&["verify", "--suite", "bogus", "--q", "3"]);
    assert_eq!(unknown.status.code(), Some(2));
    println!("PASS verify exits: 0 on pass, 3 over guard, 2 on unknown suite");
}

#[test]
fn usage_and_guard_exit_codes() {
    let both = flowq(&["stable", "--graph", "k3", "--edges", "x", "--q", "3"]);
    assert_eq!(both.status.code(), Some(2), "two graph sources");
    let neither = flowq(&["stable", "--q", "3"]);
    assert_eq!(neither.status.code(), Some(2), "no graph source");
    let nofield = flowq(&["stable", "--graph", "k3"]);
    assert_eq!(nofield.status.code(), Some(2), "no field");
    let badname = flowq(&["flow", "--graph", "m0bius"]);
    assert_eq!(badname.status.code(), Some(2), "unknown catalog name");
    let badq = flowq(&["stable", "--graph", "k3", "--q", "15"]);
    assert_eq!(badq.status.code(), Some(2), "15 is not a prime power");
    let evenq = flowq(&["ncount", "--graph", "k3", "--q", "4"]);
    assert_eq!(evenq.status.code(), Some(2), "even order");
    let guard = flowq(&["stable", "--graph", "petersen", "--q", "9"]);
    assert_eq!(guard.status.code(), Some(3), "8^14 assignments over the ceiling");
    println!("PASS exit codes: 2 on usage errors, 3 on tripped resource guards");
}

#[test]
fn flow_eval_overflow_is_rejected() {
    // A 24-edge two-vertex bank has a degree-23 flow polynomial; huge q
    // must be refused rather than silently wrapping.
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bank.edges");
    std::fs::write(&path, "0 1\n".repeat(24)).unwrap();
    let big = flowq(&["flow", "--edges", path.to_str().unwrap(), "--q", "1000000"]);
    assert_eq!(big.status.code(), Some(2), "overflow-bound rejection");
    let small = flowq(&["flow", "--edges", path.to_str().unwrap(), "--q", "3"]);
    assert!(small.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&small)).unwrap();
    // Nowhere-zero Z_3 flows on 24 parallel edges: (2^24 + 2)/3.
    assert_eq!(v["results"]["flow"], (1 << 24) as i64 / 3 + 1);
    println!("PASS overflow guard: large evaluations rejected, exact ones allowed");
}
