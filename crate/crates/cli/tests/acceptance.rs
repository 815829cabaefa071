//! Acceptance gate: one criterion per test, each printing a PASS/FAIL
//! line (visible with `--nocapture`) and asserting it.

use std::time::{Duration, Instant};

use slitflat_cli::checks::{self, Check};

fn report(criterion: usize, name: &str, checks: &[Check], elapsed: Duration, limit: Duration) {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let in_time = elapsed <= limit;
    let pass = failed.is_empty() && in_time;
    println!(
        "ACCEPTANCE {:2} {:<24} {} ({} checks, {:.2?} of {:.0?} budget)",
        criterion,
        name,
        if pass { "PASS" } else { "FAIL" },
        checks.len(),
        elapsed,
        limit,
    );
    for c in &failed {
        println!("  failed: {} {}", c.name, c.detail);
    }
    assert!(!checks.is_empty(), "criterion {}: no checks ran", criterion);
    assert!(
        failed.is_empty(),
        "criterion {}: {} checks failed",
        criterion,
        failed.len()
    );
    assert!(
        in_time,
        "criterion {}: {:.2?} over the {:.0?} budget",
        criterion, elapsed, limit
    );
}

fn run(criterion: usize, name: &str, limit_s: u64, f: impl FnOnce() -> Vec<Check>) {
    let start = Instant::now();
    let checks = f();
    report(
        criterion,
        name,
        &checks,
        start.elapsed(),
        Duration::from_secs(limit_s),
    );
}

#[test]
fn criterion_01_stratum_membership() {
    run(1, "stratum-membership", 1, checks::suite_strata);
}

#[test]
fn criterion_02_torus_oracle() {
    run(2, "torus-oracle", 30, || checks::suite_torus_oracle(20));
}

#[test]
fn criterion_03_one_slit_cylinders() {
    run(3, "one-slit-cylinders", 10, || {
        checks::suite_one_slit_cylinders(20)
    });
}

#[test]
fn criterion_04_theta_finiteness() {
    run(4, "theta-finiteness", 120, || checks::suite_theta_finite(50));
}

#[test]
fn criterion_05_record_accumulation() {
    run(5, "record-accumulation", 120, || {
        checks::suite_record_accumulation(30)
    });
}

#[test]
fn criterion_06_doubling_invariance() {
    run(6, "doubling-invariance", 60, || checks::suite_doubling(10));
}

#[test]
fn criterion_07_double_cover_directions() {
    run(7, "double-cover-directions", 60, || checks::suite_cover(10));
}

#[test]
fn criterion_08_dirichlet_bound() {
    run(8, "dirichlet-bound", 1, checks::suite_dirichlet);
}

#[test]
fn criterion_09_depth_hierarchy() {
    run(9, "depth-hierarchy", 600, || {
        checks::suite_depth_hierarchy(false)
            .into_iter()
            .filter(|c| !c.name.ends_with("-rank-bound"))
            .collect()
    });
}

#[test]
fn criterion_10_rank_bound() {
    // The bound is evaluated inside the calibrated depth runs.
    run(10, "rank-bound", 600, || {
        checks::suite_depth_hierarchy(false)
            .into_iter()
            .filter(|c| c.name.ends_with("-rank-bound"))
            .collect()
    });
}
