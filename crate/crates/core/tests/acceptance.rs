//! Acceptance gate: runs every verification suite with a fixed seed and
//! prints one pass/fail line per criterion.

use satokp::verify::{run_suite, SUITES};

#[test]
fn acceptance() {
    let seed = 20260824u64;
    let mut all_ok = true;
    let mut lines = Vec::new();
    for name in SUITES {
        let report = run_suite(name, seed).expect("known suite");
        lines.push(report.summary());
        all_ok &= report.passed();
    }
    println!("\n=== acceptance ===");
    for line in &lines {
        println!("{line}");
    }
    assert!(all_ok, "acceptance failures:\n{}", lines.join("\n"));
}
