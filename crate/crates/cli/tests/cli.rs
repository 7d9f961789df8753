//! End-to-end tests of the binary: golden outputs, determinism, exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cantor-kabelian"));
    cmd.env_remove("CANTOR_ENUM_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn prefix_golden() {
    let out = run(&["prefix", "9"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "101000101\n");
}

#[test]
fn letter_golden() {
    let out = run(&["letter", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn complexity_golden() {
    let out = run(&["complexity", "--k", "1", "--from", "1", "--to", "4", "--method", "both"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,p_k,method\n1,2,both\n2,2,both\n3,3,both\n4,3,both\n");
}

#[test]
fn factors_golden() {
    let out = run(&["factors", "3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "word,witness\n000,3\n001,4\n010,1\n100,2\n101,0\n"
    );
}

#[test]
fn special_golden() {
    let right = run(&["special", "2", "--side", "right"]);
    assert_eq!(stdout(&right), "word\n00\n10\n");
    let left = run(&["special", "2", "--side", "left"]);
    assert_eq!(stdout(&left), "word\n00\n01\n");
}

#[test]
fn verify_reduction_clean() {
    let out = run(&["verify", "theorem-b", "--k", "2", "--max-len", "40"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "status,count,first_counterexample\nok,0,\n");
}

#[test]
fn gaps_golden() {
    let out = run(&["gaps", "--count", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "j,d_j\n1,1\n2,3\n3,1\n4,9\n");
}

#[test]
fn types_golden() {
    let out = run(&["types", "--level", "1", "--word", "0001"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "residue\n0\n");
}

#[test]
fn json_rows_are_stable() {
    let out = run(&["--format", "json", "complexity", "--k", "2", "--from", "2", "--to", "3", "--method", "fast"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["k"], 2);
    assert_eq!(value["rows"][0]["p_k"], 3);
    assert_eq!(value["rows"][1]["p_k"], 5);
}

#[test]
fn fast_route_notes_fallback_lengths() {
    let out = run(&["complexity", "--k", "3", "--from", "1", "--to", "12", "--method", "fast"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // Below the k = 3 threshold the method column records the fallback.
    assert!(text.contains("1,2,brute\n"));
    assert!(text.contains("10,16,fast\n"));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("brute force"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["complexity", "--k", "3", "--from", "1", "--to", "30", "--method", "both"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn cap_exceeded_exits_3() {
    let out = run(&["factors", "200000"]);
    assert_eq!(out.status.code(), Some(3));

    let out = bin()
        .env("CANTOR_ENUM_CAP", "10")
        .args(["factors", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // An explicit flag wins over the environment.
    let out = bin()
        .env("CANTOR_ENUM_CAP", "10")
        .args(["--cap", "100", "factors", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["complexity", "--k", "1", "--from", "5", "--to", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["complexity", "--k", "1", "--from", "1", "--to", "2", "--method", "quantum"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_factor_word_exits_1() {
    let out = run(&["types", "--level", "1", "--word", "11"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn guess_emits_verified_representation() {
    let out = run(&["guess", "--target", "p1", "--max-rank", "8", "--train", "200", "--test", "2000"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["base"], 3);
    assert_eq!(value["digit_order"], "lsd_first");
    assert!(value["rank"].as_u64().unwrap() <= 8);
}

#[test]
fn guess_rank_bound_failure_exits_1() {
    let out = run(&["guess", "--target", "pk:3", "--max-rank", "1", "--train", "100", "--test", "100"]);
    assert_eq!(out.status.code(), Some(1));
}
