//! Black-box checks of the `algdiff` binary: the documented invocations,
//! operator-JSON round-trips, and exit-code conventions.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algdiff"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn algdiff")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("algdiff-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn resolvent_of_square_root() {
    let out = run(&["resolvent", "--rational", "--expr", "Y^2-(1+X)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["var"], "Dx");
    // canonical form of 2(1+X)Dx - 1
    assert_eq!(v["coeffs"][0][0], "-1/2");
    assert_eq!(v["coeffs"][1][0], "1");
    assert_eq!(v["coeffs"][1][1], "1");
}

#[test]
fn bounds_match_known_profile() {
    let out = run(&["bounds", "--dx", "2", "--dy", "2", "--d", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["eta"]["r=2"], 17);
    assert_eq!(v["thm3"], 11);
}

#[test]
fn expand_sparse_witness() {
    let out = run(&[
        "expand", "--modulus", "9973", "--expr", "Y^5-Y+X^5", "--root", "0",
        "--terms", "30", "--via", "recurrence",
    ]);
    assert!(out.status.success());
    let got: Vec<String> = stdout_of(&out).lines().map(str::to_owned).collect();
    assert_eq!(got.len(), 30);
    for (n, c) in got.iter().enumerate() {
        let want = if n == 5 || n == 25 { "1" } else { "0" };
        assert_eq!(c, want, "coefficient {n}");
    }
}

#[test]
fn operator_json_round_trips_through_verify_and_expand() {
    let op_path = tmp_path("op.json");
    let out = run(&[
        "resolvent", "--rational", "--expr", "Y^2-(1+X)",
        "--output", op_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "verify", "--rational", "--expr", "Y^2-(1+X)", "--op", op_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("verified"));

    let out = run(&[
        "expand", "--rational", "--expr", "Y^2-(1+X)", "--root", "1",
        "--terms", "5", "--via", "recurrence", "--op", op_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let got: Vec<String> = stdout_of(&out).lines().map(str::to_owned).collect();
    assert_eq!(got, ["1", "1/2", "-1/8", "1/16", "-5/128"]);
    let _ = std::fs::remove_file(&op_path);
}

#[test]
fn verify_rejects_a_wrong_operator() {
    let op_path = tmp_path("wrong.json");
    std::fs::write(&op_path, r#"{"var":"Tx","coeffs":[["-3"],["1"]]}"#).unwrap();
    // theta - 3 does not annihilate the roots of Y^2 - (1 + X)
    let out = run(&[
        "verify", "--rational", "--expr", "Y^2-(1+X)", "--op", op_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_file(&op_path);
}

#[test]
fn hypothesis_failures_exit_one() {
    // both field flags at once
    let out = run(&["resolvent", "--modulus", "7", "--rational", "--expr", "Y^2-X"]);
    assert_eq!(out.status.code(), Some(1));
    // P constant in Y
    let out = run(&["resolvent", "--rational", "--expr", "X^2-1"]);
    assert_eq!(out.status.code(), Some(1));
    // unreadable input path
    let out = run(&["resolvent", "--rational", "--input", "/nonexistent/p.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn expr_dash_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = bin()
        .args(["resolvent", "--rational", "--expr", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Y^2-(1+X)\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["var"], "Dx");
}

#[test]
fn telescope_and_algtodiff_certify_over_a_prime_field() {
    let op_path = tmp_path("theta.json");
    let out = run(&[
        "telescope", "--modulus", "9973", "--expr", "Y^2 - X*Y - 1",
        "--mode", "refined", "--output", op_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "verify", "--modulus", "9973", "--expr", "Y^2 - X*Y - 1",
        "--op", op_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let _ = std::fs::remove_file(&op_path);

    let out = run(&[
        "algtodiff", "--modulus", "9973", "--expr", "Y^3 - Y - X",
        "--preset", "3", "--verify",
    ]);
    assert!(out.status.success());
}

#[test]
fn lab_table1_emits_json() {
    let out = run(&["lab", "--modulus", "9973", "--json", "table1", "--max-d", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["rows"][0]["values"]["deg_x"], 2);
    assert_eq!(v["rows"][0]["values"]["eta"], 2);
}
