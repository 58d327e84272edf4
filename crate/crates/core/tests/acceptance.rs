//! One test per acceptance criterion. Each prints a single PASS/FAIL line;
//! run with `cargo test -p fabius --test acceptance -- --nocapture --test-threads 1`.

use fabius::selftest::{self, CriterionReport};

fn check(report: CriterionReport) {
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_golden_table() {
    check(selftest::golden_table());
}

#[test]
fn criterion_02_coefficient_integers() {
    check(selftest::f_integers());
}

#[test]
fn criterion_03_functional_equation() {
    check(selftest::functional_equation());
}

#[test]
fn criterion_04_reflection_and_evenness() {
    check(selftest::reflection_and_evenness());
}

#[test]
fn criterion_05_moment_routes() {
    check(selftest::moment_routes());
}

#[test]
fn criterion_06_derivative_cascade() {
    check(selftest::derivative_cascade());
}

#[test]
fn criterion_07_spectral_agreement() {
    check(selftest::spectral_agreement());
}

#[test]
fn criterion_08_step_convergence() {
    check(selftest::step_convergence());
}

#[test]
fn criterion_09_monte_carlo() {
    check(selftest::monte_carlo());
}

#[test]
fn criterion_10_poisson_identities() {
    check(selftest::poisson_identities());
}
