use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grass-slice"))
        .args(args)
        .env("GRASS_SLICE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn dict_forward_matches_the_worked_example() {
    let out = run(&["dict", "--v", "1,1", "--d", "1,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "grass-slice/1");
    assert_eq!(v["lambda"], serde_json::json!([2, 1]));
    assert_eq!(v["mu"], serde_json::json!([3, 0]));
    assert_eq!(v["a"], serde_json::json!([1, 1, 1]));
}

#[test]
fn dict_backward_from_lambda_and_mu() {
    let out = run(&["dict", "--lambda", "2,1", "--mu", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["n"], 4);
    assert_eq!(v["v"], serde_json::json!([1, 1, 0]));
    assert_eq!(v["d"], serde_json::json!([1, 1, 0]));
}

#[test]
fn kostka_prints_a_number() {
    let out = run(&["kostka", "--shape", "2,1", "--content", "1,1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2");
}

#[test]
fn jordan_reads_a_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nilp.json");
    fs::write(&path, r#"{"field": "Q", "matrix": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#).unwrap();
    let out = run(&["jordan", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1,1,1");
}

#[test]
fn phi_reads_a_point_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.json");
    fs::write(
        &path,
        r#"{"field": "F5", "n": 3, "v": [1, 1], "d": [1, 1], "b": [[[1]]], "p": [[[1]], [[0]]], "q": [[[0]], [[1]]]}"#,
    )
    .unwrap();
    let out = run(&["phi", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["jordan_type"], serde_json::json!([3]));
}

#[test]
fn counts_as_csv() {
    let out = run(&["slice-count", "--lambda", "1,1", "--mu", "2", "--q", "2", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case-id,q,count"));
    assert_eq!(lines.next(), Some(r#""lambda=1,1;mu=2",2,4"#));
}

#[test]
fn fiber_fit_gives_the_benchmark() {
    let out = run(&["fiber", "--lambda", "2,1", "--a", "1,1,1", "--q", "2,3", "--fit"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2q + 1"), "{}", stdout(&out));
}

#[test]
fn decompose_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["decompose", "--mu", "2,0", "--m", "2", "--q", "2", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["holds"], true);
    assert_eq!(written["reports"][0]["grassmannian_points"], 7);
}

#[test]
fn flags_can_come_from_an_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    fs::write(&path, r#"{"schema": "grass-slice/1", "v": [1, 1], "d": [1, 1]}"#).unwrap();
    let out = run(&["mult-check", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["polynomial_text"], "2q + 1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["dict", "--v", "x"]).status.code(), Some(1));
    assert_eq!(run(&["kostka", "--shape", "1,2", "--content", "3"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    let over = run(&["slice-count", "--lambda", "1,1,1", "--mu", "3", "--q", "3", "--budget", "10"]);
    assert_eq!(over.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_input_is_diagnosed_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"field\": \"Q\",\n  \"matrix\": [[0, 0]\n}\n").unwrap();
    let out = run(&["jordan", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "verify", "--suite", "phi", "--seed", "42", "--samples", "20", "--max-total", "3", "--json",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stdout(&out));
    }
    let (ja, jb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let report: Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(report["suite"], "phi");
    assert_eq!(report["seed"], 42);
    assert_eq!(report["failures"], serde_json::json!([]));
}

#[test]
fn verify_replays_a_single_case() {
    let out = run(&["verify", "--suite", "phi", "--samples", "10", "--case", "F5:v=1,1;d=1,1", "--fields", "F5"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("1 cases"), "{}", stdout(&out));
}

#[test]
fn verify_honours_the_time_limit() {
    let out = run(&["verify", "--suite", "phi", "--time-limit", "0"]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
}

#[test]
fn small_suites_pass() {
    for suite in ["dictionary", "howe", "psi"] {
        let out = run(&["verify", "--suite", suite]);
        assert!(out.status.success(), "{suite}: {}", stdout(&out));
    }
}
