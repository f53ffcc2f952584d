//! Acceptance suite: one test per verification criterion.
//!
//! Each test prints its pass/fail line (visible with `--nocapture`) and then
//! asserts, so a failing criterion names itself and its evidence.

use linca::verify::run_criterion;

fn check(id: usize) {
    let report = run_criterion(id);
    println!(
        "criterion {:2} ({}): {} — {}",
        report.id,
        report.name,
        if report.passed { "PASS" } else { "FAIL" },
        report.detail
    );
    assert!(
        report.passed,
        "criterion {} ({}) failed: {}",
        report.id, report.name, report.detail
    );
}

#[test]
fn criterion_01_hamming_complement() {
    check(1);
}

#[test]
fn criterion_02_nonlinearity_bound() {
    check(2);
}

#[test]
fn criterion_03_jacobian_complement() {
    check(3);
}

#[test]
fn criterion_04_linear_handle() {
    check(4);
}

#[test]
fn criterion_05_deviant_example() {
    check(5);
}

#[test]
fn criterion_06_deviant_soundness() {
    check(6);
}

#[test]
fn criterion_07_zero_window() {
    check(7);
}

#[test]
fn criterion_08_matrix_count() {
    check(8);
}

#[test]
fn criterion_09_windowed_evolution() {
    check(9);
}

#[test]
fn criterion_10_minimal_sets() {
    check(10);
}

#[test]
fn criterion_11_window_output_table() {
    check(11);
}
