//! Every estimator in the library, evaluated on a sample from its natural
//! domain.
//!
//! Run with: cargo run --example estimator_tour

use equibreak::battery::samples;
use equibreak::estimators::{Estimator, EstimatorKind};
use equibreak::measure::EmpiricalMeasure;

fn main() -> equibreak::Result<()> {
    let uni = EmpiricalMeasure::univariate(&[1.0, 2.0, 3.0, 4.0, 100.0])?;

    let rows: Vec<(Estimator, &EmpiricalMeasure, &str)> = vec![
        (
            Estimator::new(EstimatorKind::Mean),
            &uni,
            "drawn to the outlier",
        ),
        (Estimator::new(EstimatorKind::Median), &uni, "ignores it"),
        (
            Estimator::new(EstimatorKind::Mad),
            &uni,
            "half-width around the median",
        ),
        (
            Estimator::new(EstimatorKind::MadStar),
            &uni,
            "widened interval variant",
        ),
    ];
    println!("univariate sample {{1, 2, 3, 4, 100}}:");
    for (est, p, note) in &rows {
        let e = est.evaluate(p)?;
        println!("  {:<22} {:?}   ({note})", est.name(), e.value.flatten());
    }

    let planar = samples::planar_six();
    let e = Estimator::new(EstimatorKind::L1Median).evaluate(&planar)?;
    println!(
        "\nplanar six-point cloud:\n  {:<22} {:?}   ({} iterations)",
        "l1_median",
        e.value.flatten(),
        e.iterations
    );

    let regression = samples::regression_eight();
    for kind in [EstimatorKind::LsOrigin, EstimatorKind::LsOriginBounded] {
        let est = Estimator::new(kind);
        let e = est.evaluate(&regression)?;
        println!(
            "\nregression sample (8 points):\n  {:<22} {:?}",
            est.name(),
            e.value.flatten()
        );
    }

    let logistic = samples::logistic_eight();
    let est = Estimator::new(EstimatorKind::LogisticRegularized);
    let e = est.evaluate(&logistic)?;
    println!(
        "\nbinary sample (8 points):\n  {:<22} {:?}   (objective {:.5})",
        est.name(),
        e.value.flatten(),
        e.objective.unwrap_or(f64::NAN)
    );

    let growth = samples::growth_seven();
    let e = Estimator::new(EstimatorKind::GrowthFit).evaluate(&growth)?;
    println!(
        "\ntrend sample (7 points on a sigmoid):\n  {:<22} {:?}",
        "growth_fit",
        e.value.flatten()
    );

    let saturation = samples::saturation_exact();
    let e = Estimator::new(EstimatorKind::MichaelisMentenFit).evaluate(&saturation)?;
    println!(
        "\nsaturation sample (exact curve):\n  {:<22} {:?}   (residual {:.2e})",
        "michaelis_menten_fit",
        e.value.flatten(),
        e.residual
    );
    Ok(())
}
