use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxweight"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn ratefn_eval_and_inverse() {
    let out = run(&["ratefn", "--dist", "gaussian", "--eval", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "2.0");

    let out = run(&["ratefn", "--dist", "gaussian", "--inverse", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "2.0");

    let out = run(&["ratefn", "--dist", "rademacher", "--eval", "1"]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn ratefn_needs_exactly_one_mode() {
    assert_eq!(code(&run(&["ratefn", "--dist", "gaussian"])), 1);
    let both = run(&["ratefn", "--dist", "gaussian", "--eval", "1", "--inverse", "1"]);
    assert_eq!(code(&both), 1);
}

#[test]
fn predict_matches_library() {
    let out = run(&["predict", "--family", "matching", "--dist", "gaussian", "--n", "100"]);
    assert_eq!(code(&out), 0);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 303.485425877029).abs() < 1e-9);
}

#[test]
fn check_tails_prints_counterexample_profile() {
    let out = run(&["check-tails", "--dist", "steptail", "--grid", "1.5:3.5:1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,r"));
    let r: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let expect = [2.6126694741651906, 1.9261207228261302, 1.9444993342087405];
    assert_eq!(r.len(), 3);
    for (a, b) in r.iter().zip(expect) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn solve_copy_outputs_one_indexed_edges() {
    let out = run(&[
        "solve", "--family", "copy", "--pattern", "triangle", "--dist", "gaussian", "--n", "6",
        "--seed", "2",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    for e in edges {
        for x in e.as_array().unwrap() {
            let x = x.as_u64().unwrap();
            assert!((1..=6).contains(&x));
        }
    }
}

#[test]
fn simulate_writes_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = run(&[
        "simulate", "--family", "tree", "--dist", "uniform", "--n", "30", "--trials", "10",
        "--seed", "1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.starts_with("trial,weight,ratio,found_certificate,certified_bound"));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["trials"], 10);
}

fn simulate_bytes(dir: &Path, workers: &str) -> Vec<u8> {
    let path = dir.join(format!("w{workers}.json"));
    let out = run(&[
        "simulate", "--family", "matching", "--dist", "laplace", "--n", "25", "--trials", "30",
        "--seed", "9", "--delta", "0.3", "--workers", workers, "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    std::fs::read(path).unwrap()
}

#[test]
fn worker_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(simulate_bytes(dir.path(), "1"), simulate_bytes(dir.path(), "8"));
}

#[test]
fn violations_exit_three() {
    // a single trial has zero standard error, so an unlucky draw exceeds
    // the expectation bound outright
    let out = run(&[
        "simulate", "--family", "matching", "--dist", "gaussian", "--n", "2", "--trials", "1",
        "--seed", "0",
    ]);
    assert_eq!(code(&out), 3);
    let out = run(&[
        "simulate", "--family", "matching", "--dist", "gaussian", "--n", "2", "--trials", "1",
        "--seed", "1",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn certify_and_table_emit_csv() {
    let out = run(&[
        "certify", "--family", "matching", "--dist", "gaussian", "--n", "50", "--seed", "1",
        "--trials", "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("trial,level,found,certified_bound,exact_optimum,ratio_to_prediction"));
    assert_eq!(text.lines().count(), 4);

    let out = run(&[
        "table", "--family", "matching", "--dist", "gaussian", "--n-list", "10,20", "--trials",
        "5", "--seed", "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 3);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["ratefn", "--dist", "bogus", "--eval", "1"])), 1);
    let missing_pattern = run(&["predict", "--family", "copy", "--dist", "gaussian", "--n", "10"]);
    assert_eq!(code(&missing_pattern), 1);
    let stray_pattern = run(&[
        "predict", "--family", "tree", "--pattern", "triangle", "--dist", "gaussian", "--n", "10",
    ]);
    assert_eq!(code(&stray_pattern), 1);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn domain_errors_exit_two() {
    let too_big = run(&[
        "simulate", "--family", "hamcycle", "--dist", "gaussian", "--n", "30", "--trials", "1",
        "--seed", "0",
    ]);
    assert_eq!(code(&too_big), 2);
    let bad_delta = run(&[
        "certify", "--family", "matching", "--dist", "gaussian", "--n", "50", "--seed", "1",
        "--trials", "1", "--delta", "1.5",
    ]);
    assert_eq!(code(&bad_delta), 2);
}
