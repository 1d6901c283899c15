//! Distances between finitely supported distributions, and the two facts
//! the whole breakdown theory leans on: distances never exceed one, and
//! mixing in a common component contracts them.
//!
//! Run with: cargo run --example metric_axioms

use equibreak::measure::{mix, prob_distance, EmpiricalMeasure, ProbMetricKind};

fn main() -> equibreak::Result<()> {
    let p = EmpiricalMeasure::univariate(&[1.5, 1.8, 1.3])?;
    let q = EmpiricalMeasure::univariate(&[1.5, 1.8, 100.0])?;
    let far = EmpiricalMeasure::univariate(&[-50.0, 60.0, 1000.0])?;

    let metrics = [
        ProbMetricKind::TotalVariation,
        ProbMetricKind::Kuiper { intervals: 1 },
        ProbMetricKind::Kuiper { intervals: 2 },
    ];

    println!("distances from p = {{1.5, 1.8, 1.3}}:");
    for m in metrics {
        let dq = prob_distance(m, &p, &q)?;
        let dfar = prob_distance(m, &p, &far)?;
        println!(
            "  {:<8}  to one-outlier copy: {dq:.4}   to disjoint sample: {dfar:.4}",
            m.label()
        );
    }

    // However wild the contamination, replacing a third of the mass moves
    // a distribution by at most a third.
    println!("\nmixture contraction (one third replaced by junk):");
    for m in metrics {
        let contaminated_1 = mix(&p, &EmpiricalMeasure::univariate(&[1e9])?, 2.0 / 3.0)?;
        let contaminated_2 = mix(&p, &EmpiricalMeasure::univariate(&[-1e9])?, 2.0 / 3.0)?;
        let d = prob_distance(m, &contaminated_1, &contaminated_2)?;
        println!("  {:<8}  distance {d:.4} <= 1/3", m.label());
    }

    // The sup over all pairs is exactly one: disjoint supports realize it
    // in total variation.
    let d = prob_distance(ProbMetricKind::TotalVariation, &p, &far)?;
    println!("\ndisjoint supports realize the diameter: tv = {d:.4}");
    Ok(())
}
