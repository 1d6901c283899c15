//! The full acceptance battery: one test per headline behavior, each
//! printing a single PASS/FAIL line (run with `--nocapture` to see them
//! on success; failures always show the offending checks).

use equibreak::battery::{all_pass, criterion, Check};

fn run(index: usize, title: &str) {
    let checks: Vec<Check> = criterion(index);
    let pass = all_pass(&checks);
    println!(
        "acceptance {index:02} {} — {title}",
        if pass { "PASS" } else { "FAIL" }
    );
    if !pass {
        for c in checks.iter().filter(|c| !c.pass) {
            eprintln!(
                "  check failed: {} (expected {}, observed {})",
                c.name, c.expected, c.observed
            );
        }
        panic!("acceptance criterion {index} failed");
    }
}

#[test]
fn criterion_01_median_six_point_breakdown() {
    run(
        1,
        "median six-point: search, closed form, and bound agree at 1/2",
    );
}

#[test]
fn criterion_02_mean_breaks_at_one_point() {
    run(2, "mean: one replacement breaks every battery sample");
}

#[test]
fn criterion_03_collapsed_scale() {
    run(
        3,
        "plain scale on ties: zero, infinitely far, closed form 0",
    );
}

#[test]
fn criterion_04_robust_scale_attains_bound() {
    run(
        4,
        "robust scale: bound attained on tie-heavy and tie-free samples",
    );
}

#[test]
fn criterion_05_bound_safety() {
    run(
        5,
        "search lower bounds never exceed the degeneracy bound (20+ combos)",
    );
}

#[test]
fn criterion_06_clamped_slope_never_breaks() {
    run(
        6,
        "clamped slope: no divergence, bounded on random data, consistent",
    );
}

#[test]
fn criterion_07_penalized_logistic_survives() {
    run(
        7,
        "penalized logistic: bounded under attack, group checks pass",
    );
}

#[test]
fn criterion_08_trend_fit_separation() {
    run(
        8,
        "trend fit: survives to k=5, breaks at k=6 by response separation",
    );
}

#[test]
fn criterion_09_saturating_fit() {
    run(
        9,
        "saturating fit: exact recovery, carrier rescaling, 2/3 bound",
    );
}

#[test]
fn criterion_10_spatial_median() {
    run(
        10,
        "spatial median: median agreement, shifts, half breakdown, shear",
    );
}

#[test]
fn criterion_11_metric_axioms() {
    run(
        11,
        "distribution metrics: axioms hold on 1000 random triples",
    );
}

#[test]
fn criterion_12_walking_paths_diverge() {
    run(12, "median walking paths: both built-in traces diverge");
}
