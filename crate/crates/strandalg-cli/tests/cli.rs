//! End-to-end checks of the binary: exit codes, output stability, and the
//! parser round trip.

use std::process::{Command, Output};

fn strandalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strandalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = strandalg(args);
    assert!(out.status.success(), "{args:?} failed: {out:?}");
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn nf_examples() {
    assert_eq!(stdout_of(&["nf", "seq=12; s1 s1"]).trim(), "x2 1_{12}");
    assert_eq!(stdout_of(&["nf", "seq=22; s1 s1"]).trim(), "0");
    assert_eq!(
        stdout_of(&["nf", "seq=212; s2 s1 s2 - s1 s2 s1"]).trim(),
        "-1_{212}"
    );
}

#[test]
fn nf_mod_two_drops_signs() {
    let over_z = stdout_of(&["nf", "seq=1111; s1 s3"]);
    let over_f2 = stdout_of(&["nf", "seq=1111; s1 s3", "--coeff", "fp:2"]);
    assert!(over_z.trim().starts_with('-'));
    assert!(!over_f2.trim().starts_with('-'));
}

#[test]
fn contract_exit_codes() {
    // a boundary idempotent: exit 0
    let out = strandalg(&["contract", "--seq", "11"]);
    assert_eq!(out.status.code(), Some(0));
    // not a boundary: exit 1
    let out = strandalg(&["contract", "--seq", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    let out = strandalg(&["nf", "seq=13; s1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = strandalg(&["nf", "seq=12; x1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("token"), "semantic error names the token: {err}");
}

#[test]
fn verify_output_is_byte_stable() {
    let a = stdout_of(&["verify", "--n", "2", "--m", "1", "--json"]);
    let b = stdout_of(&["verify", "--n", "2", "--m", "1", "--json"]);
    assert_eq!(a, b);
    assert!(a.contains("strandalg.verify/1"));
}

#[test]
fn verify_small_battery_passes() {
    let out = strandalg(&["verify", "--n", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"));
}

#[test]
fn decompose_and_check_round_trip() {
    let json = stdout_of(&[
        "decompose",
        "--source",
        "212",
        "--targets",
        "1 2^(2)",
        "2^(2) 1",
        "--json",
    ]);
    let dir = std::env::temp_dir().join("strandalg-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    std::fs::write(&path, &json).unwrap();
    let out = strandalg(&["decompose", "--check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn golden_nf_json() {
    let out = stdout_of(&["nf", "seq=22; x2 s1", "--json"]);
    let expected = include_str!("golden/nf_22_x2s1.json");
    assert_eq!(out.trim(), expected.trim());
}

#[test]
fn stdin_expression_mode() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_strandalg"))
        .args(["nf", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"seq=12; s1 s1\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "x2 1_{12}");
}

#[test]
fn pol_action() {
    let out = stdout_of(&["pol", "seq=22; s1", "--monomial", "1,0"]);
    assert!(out.contains("1"), "divided difference of x1 is 1: {out}");
    let out = stdout_of(&["pol", "seq=11; s1", "--w", "2,1"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn em_idempotent_via_cli() {
    let e = stdout_of(&["em", "--m", "3"]);
    assert!(!e.trim().is_empty());
    // squaring through mul returns the same element
    let expr = format!("seq=222; {}", "x1 x1 x2 s1 s2 s1");
    let prod = stdout_of(&["mul", &expr, &expr]);
    let single = stdout_of(&["nf", &expr]);
    assert_eq!(prod.trim(), single.trim());
}
