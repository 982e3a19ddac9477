//! The acceptance battery at full strength: one test (and one printed
//! pass/fail line) per criterion. Run with `--nocapture` to see the lines:
//!
//!     cargo test -p grasspi-core --test acceptance -- --nocapture

use grasspi_core::selftest::{self, CheckResult, Level};

fn seed() -> u64 {
    std::env::var("GRASSPI_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0xC0FFEE)
}

fn run(result: CheckResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_1_grassmann_kernel() {
    run(selftest::criterion_1(Level::Full, seed()));
}

#[test]
fn criterion_2_dominant_part_closed_forms() {
    run(selftest::criterion_2(Level::Full, seed()));
}

#[test]
fn criterion_3_one_variable_theory() {
    run(selftest::criterion_3(Level::Full, seed()));
}

#[test]
fn criterion_4_straightening_soundness() {
    run(selftest::criterion_4(Level::Full, seed()));
}

#[test]
fn criterion_5_decision_cross_validation() {
    run(selftest::criterion_5(Level::Full, seed()));
}

#[test]
fn criterion_6_weight_separating_witnesses() {
    run(selftest::criterion_6(Level::Full, seed()));
}

#[test]
fn criterion_7_central_polynomials() {
    run(selftest::criterion_7(Level::Full, seed()));
}

#[test]
fn criterion_8_p_power_beginnings_span() {
    run(selftest::criterion_8(Level::Full, seed()));
}

#[test]
fn criterion_9_scalar_brute_force() {
    run(selftest::criterion_9(Level::Full, seed()));
}
