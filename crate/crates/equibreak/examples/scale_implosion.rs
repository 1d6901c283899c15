//! Scale estimators break two ways: explosion (the scale runs to
//! infinity) and implosion (it collapses to zero). On a sample whose
//! majority already ties, the plain interval-width scale is born broken,
//! while the widened variant survives exactly as long as its cap allows.
//!
//! Run with: cargo run --example scale_implosion

use equibreak::battery::samples;
use equibreak::breakdown::{fsbp_search, ContaminationPlan};
use equibreak::estimators::{Estimator, EstimatorKind};
use equibreak::group::ParamMetricKind;

fn main() -> equibreak::Result<()> {
    let ties = samples::tie_heavy();
    println!(
        "tie-heavy sample: {:?}",
        ties.points().iter().map(|x| x[0]).collect::<Vec<_>>()
    );

    let mad = Estimator::new(EstimatorKind::Mad);
    let collapsed = mad.evaluate(&ties)?.value;
    println!("\nplain scale: {:?}", collapsed.flatten());
    let healthy = equibreak::group::ParameterPoint::Scale { value: 1.0 };
    println!(
        "log distance from a healthy scale: {:?}",
        ParamMetricKind::ScaleLog.distance(&collapsed, &healthy)?
    );

    let plan = ContaminationPlan::default_for(&ties)?;
    let mad_star = Estimator::new(EstimatorKind::MadStar);
    println!(
        "\nwidened scale on the same sample: {:?}",
        mad_star.evaluate(&ties)?.value.flatten()
    );
    let report = fsbp_search(&mad_star, &ties, &plan, 3)?;
    println!(
        "breaks at k = {:?} (cap {})",
        report.k_break,
        report.upper.describe()
    );
    if let Some(w) = &report.witness {
        println!(
            "implosion witness: move point {:?} next to the tied majority -> {:?}",
            w.indices,
            w.final_sample.iter().map(|x| x[0]).collect::<Vec<_>>()
        );
    }

    // On a tie-free sample the same estimator withstands one replacement
    // and needs two, matching its cap of 2/5.
    let distinct = samples::distinct_five();
    let plan = ContaminationPlan::default_for(&distinct)?;
    let report = fsbp_search(&mad_star, &distinct, &plan, 3)?;
    println!(
        "\ntie-free sample {:?}: breaks at k = {:?} (cap {})",
        distinct.points().iter().map(|x| x[0]).collect::<Vec<_>>(),
        report.k_break,
        report.upper.describe()
    );
    Ok(())
}
