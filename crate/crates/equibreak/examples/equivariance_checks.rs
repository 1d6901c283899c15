//! Randomized transform-then-estimate trials, including a deliberate
//! failure: the spatial median commutes with rigid motions but not with
//! shears.
//!
//! Run with: cargo run --example equivariance_checks

use equibreak::battery::samples;
use equibreak::equivariance::{check_equivariance, fixed_element_discrepancy};
use equibreak::estimators::{Estimator, EstimatorKind};
use equibreak::group::{GroupElement, GroupFamily};
use nalgebra::{DMatrix, DVector};

fn main() -> equibreak::Result<()> {
    let uni = samples::distinct_five();
    let planar = samples::planar_six();

    let cases: Vec<(
        EstimatorKind,
        GroupFamily,
        &equibreak::measure::EmpiricalMeasure,
    )> = vec![
        (EstimatorKind::Mean, GroupFamily::Affine { dim: 1 }, &uni),
        (EstimatorKind::Median, GroupFamily::Affine { dim: 1 }, &uni),
        (
            EstimatorKind::Mad,
            GroupFamily::Translation { dim: 1 },
            &uni,
        ),
        (
            EstimatorKind::L1Median,
            GroupFamily::Translation { dim: 2 },
            &planar,
        ),
        (
            EstimatorKind::L1Median,
            GroupFamily::Orthogonal { dim: 2 },
            &planar,
        ),
    ];

    println!(
        "{:<12} {:<16} {:>10} {:>14}  result",
        "estimator", "family", "trials", "max gap"
    );
    for (kind, family, sample) in cases {
        let est = Estimator::new(kind);
        let report = check_equivariance(&est, family, sample, 40, None, 7)?;
        println!(
            "{:<12} {:<16} {:>10} {:>14.3e}  {}",
            est.name(),
            report.family,
            report.converged_trials,
            report.max_discrepancy,
            if report.pass { "pass" } else { "FAIL" }
        );
    }

    // The deliberate counterexample: a unit shear moves the spatial
    // median of an asymmetric cloud off its transformed value.
    let shear = GroupElement::Affine {
        mat: DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]),
        shift: DVector::zeros(2),
    };
    let gap = fixed_element_discrepancy(
        &Estimator::new(EstimatorKind::L1Median),
        &samples::shear_witness(),
        &shear,
    )?;
    println!("\nspatial median under a unit shear: gap = {gap:.4} (not equivariant)");

    // Same story for the clamped slope: the clamp buys bounded output at
    // the cost of carrier equivariance.
    let carrier_shift = GroupElement::RegressionCarrier {
        adjust: DVector::from_element(1, -10.0),
    };
    let gap = fixed_element_discrepancy(
        &Estimator::new(EstimatorKind::LsOriginBounded),
        &samples::regression_eight(),
        &carrier_shift,
    )?;
    println!("clamped slope under a carrier shift: gap = {gap:.4} (by design)");
    Ok(())
}
