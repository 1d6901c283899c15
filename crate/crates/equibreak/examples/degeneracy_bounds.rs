//! How concentrated mass caps the breakdown point of any equivariant
//! estimator: the degenerate mass Δ of a sample yields the population cap
//! (1 − Δ)/2 and its finite-sample counterpart ⌊(n − nΔ + 1)/2⌋/n.
//!
//! Run with: cargo run --example degeneracy_bounds

use equibreak::battery::samples;
use equibreak::degeneracy::bound_for;
use equibreak::group::{GroupFamily, ParamMetricKind};
use equibreak::measure::EmpiricalMeasure;

fn main() -> equibreak::Result<()> {
    println!(
        "{:<28} {:<16} {:>6} {:>12} {:>12}",
        "sample", "family", "delta", "population", "finite-n"
    );

    let cases: Vec<(&str, EmpiricalMeasure, GroupFamily, ParamMetricKind)> = vec![
        (
            "distinct five",
            samples::distinct_five(),
            GroupFamily::Translation { dim: 1 },
            ParamMetricKind::Euclidean,
        ),
        (
            "six-point (three pairs)",
            samples::six_point(),
            GroupFamily::Translation { dim: 1 },
            ParamMetricKind::Euclidean,
        ),
        (
            "tie-heavy {0,0,0,1,2}",
            samples::tie_heavy(),
            GroupFamily::Affine { dim: 1 },
            ParamMetricKind::ScaleLog,
        ),
        (
            "planar six",
            samples::planar_six(),
            GroupFamily::Affine { dim: 2 },
            ParamMetricKind::LogDet,
        ),
        (
            "saturation data",
            samples::saturation_exact(),
            GroupFamily::ScaleX,
            ParamMetricKind::MichaelisMenten,
        ),
    ];

    for (label, p, family, metric) in &cases {
        let (delta, outcome) = bound_for(p, family, *metric)?;
        match outcome.fsbp_bound() {
            Some(_) => println!(
                "{:<28} {:<16} {:>6.2} {:>12.4} {:>12}",
                label,
                family.label(),
                delta.value,
                (1.0 - delta.value) / 2.0,
                outcome.describe(),
            ),
            None => println!(
                "{:<28} {:<16} {:>6.2} {:>12} {:>12}",
                label,
                family.label(),
                delta.value,
                "-",
                outcome.describe(),
            ),
        }
    }

    // Concentrating mass on a line in the plane drives the affine bound down.
    let degenerate = EmpiricalMeasure::from_points(
        vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![3.0, 3.0],
            vec![5.0, 0.0],
            vec![0.0, 4.0],
        ],
        equibreak::measure::SampleSpaceKind::Euclidean { dim: 2 },
    )?;
    let (delta, outcome) = bound_for(
        &degenerate,
        &GroupFamily::Affine { dim: 2 },
        ParamMetricKind::LogDet,
    )?;
    println!(
        "\nfour of six points on a line: delta = {:.4}, finite-sample cap {}",
        delta.value,
        outcome.describe()
    );
    println!("witness: {:?}", delta.witness);

    // Orthogonal maps never push anything to infinity: no breaking
    // elements, hence no cap to report.
    let (_, outcome) = bound_for(
        &samples::planar_six(),
        &GroupFamily::Orthogonal { dim: 2 },
        ParamMetricKind::Euclidean,
    )?;
    println!("\nrotations only: {}", outcome.describe());
    Ok(())
}
