//! End-to-end CLI checks: exit codes, the documented examples, JSON
//! round-trips, and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn satokp(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_satokp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn pdo_mul_derivative_times_x() {
    // ∂ ∘ x = x∂ + 1
    let d = r#"{"n":1,"x_cap":3,"order_lo":-4,"terms":{"1":[[["1"]]]}}"#;
    let x = r#"{"n":1,"x_cap":3,"order_lo":-4,"terms":{"0":[[["0","1"]]]}}"#;
    let out = satokp(
        &["pdo", "mul", "--format", "text"],
        &format!(r#"{{"p":{d},"q":{x}}}"#),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "(1*x)*D + (1) + O(D^-4)");
}

#[test]
fn pdo_json_round_trip_is_bit_identical() {
    let p = r#"{"n":2,"x_cap":4,"order_lo":-3,"terms":{"-2":[[["1/2"],["0"]],[["0","-1"],["2"]]],"1":[[["1"],["0"]],[["0"],["1"]]]}}"#;
    let once = satokp(&["pdo", "adjoint"], p);
    assert!(once.status.success());
    let twice = satokp(&["pdo", "adjoint"], &stdout(&once));
    assert!(twice.status.success());
    // (P*)* = P and the emitted JSON is accepted back bit-identically
    let back = satokp(&["pdo", "adjoint"], &stdout(&twice));
    assert_eq!(stdout(&once), stdout(&back));
}

#[test]
fn numerology_example() {
    let out = satokp(
        &["spec", "numerology", "--n", "2", "--g", "2", "--d", "2"],
        "",
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], "8");
    assert_eq!(v["dim_VGL"], 5);
}

#[test]
fn verify_example_passes() {
    let out = satokp(
        &[
            "verify", "perp-involution", "--seed", "7", "--M", "4", "--N", "4", "--n", "2",
            "--format", "text",
        ],
        "",
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn malformed_json_exits_2() {
    let out = satokp(&["pdo", "adjoint"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("malformed JSON"));
}

#[test]
fn unknown_flag_exits_2() {
    let out = satokp(&["pdo", "adjoint", "--bogus"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_monic_dressing_exits_1() {
    let p = r#"{"n":1,"x_cap":2,"order_lo":-2,"terms":{"1":[[["1"]]]}}"#;
    let out = satokp(&["kp", "dress"], p);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn deterministic_output_bytes() {
    let run = || {
        satokp(
            &["verify", "lax-normalization", "--seed", "42"],
            "",
        )
    };
    assert_eq!(run().stdout, run().stdout);
}

#[test]
fn hensel_adjoined_flag() {
    // x^2 - 2(1+w): mid 0, radical sqrt(1+w), d = 2
    let s = r#"{"n":2,"s":[{},{"0":"-2","1":"-2"}]}"#;
    let out = satokp(&["spec", "hensel", "--adjoin-sqrt", "--prec", "6"], s);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"], "2");
    assert_eq!(v["radical"]["1"], "1/2");
}

#[test]
fn grassmann_pipeline_round_trip() {
    // S = 1 + ∂^-1, certified deep: from-s then to-s recovers it
    let s = r#"{"n":1,"x_cap":2,"order_lo":-12,"terms":{"-1":[[["1"]]],"0":[[["1"]]]}}"#;
    let w = satokp(&["gr", "from-s", "--M", "3", "--N", "8"], s);
    assert!(w.status.success(), "{}", String::from_utf8_lossy(&w.stderr));
    let back = satokp(
        &["gr", "to-s", "--order-lo", "-5", "--x-cap", "2", "--format", "text"],
        &stdout(&w),
    );
    assert!(back.status.success(), "{}", String::from_utf8_lossy(&back.stderr));
    assert_eq!(stdout(&back).trim(), "(1) + (1)*D^-1 + O(D^-6)");
}
