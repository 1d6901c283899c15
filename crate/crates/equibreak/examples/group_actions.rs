//! Group elements act on samples and on the parameters estimated from
//! them; an equivariant estimator makes the square commute.
//!
//! Run with: cargo run --example group_actions

use equibreak::estimators::{Estimator, EstimatorKind};
use equibreak::group::{GroupElement, GroupFamily};
use equibreak::measure::EmpiricalMeasure;
use nalgebra::{DMatrix, DVector};

fn main() -> equibreak::Result<()> {
    let p = EmpiricalMeasure::univariate(&[1.0, 2.0, 3.0, 4.0, 5.0])?;
    let mean = Estimator::new(EstimatorKind::Mean);

    // A one-dimensional affine map x -> 3x - 4.
    let g = GroupElement::Affine {
        mat: DMatrix::from_element(1, 1, 3.0),
        shift: DVector::from_element(1, -4.0),
    };
    println!("element: {}   condition number: {}", g.label(), g.cond());

    let transformed = g.act_sample(&p)?;
    println!(
        "sample:      {:?} -> {:?}",
        p.points().iter().map(|x| x[0]).collect::<Vec<_>>(),
        transformed
            .points()
            .iter()
            .map(|x| x[0])
            .collect::<Vec<_>>(),
    );

    // Estimate-then-transform equals transform-then-estimate.
    let direct = mean.evaluate(&transformed)?.value;
    let pushed = g.act_parameter(&mean.evaluate(&p)?.value)?;
    println!("estimate of transformed sample: {:?}", direct.flatten());
    println!("transformed estimate:           {:?}", pushed.flatten());

    // Elements compose; the composition acts like the two maps in turn.
    let h = GroupElement::Translation {
        shift: DVector::from_element(1, 10.0),
    };
    let hg = h.compose(&g)?;
    println!(
        "\ncomposition: ({}) after ({}) = {}",
        h.label(),
        g.label(),
        hg.label()
    );
    let via_steps = h.act_point(p.kind(), &g.act_point(p.kind(), &[2.0])?)?;
    let via_composition = hg.act_point(p.kind(), &[2.0])?;
    println!("acting on 2.0: stepwise {via_steps:?}, composed {via_composition:?}");

    // Families hand out random elements for equivariance trials.
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let random = GroupFamily::Affine { dim: 1 }.random_element(&mut rng, p.coordinate_spread());
    println!("\na random affine element: {}", random.label());
    Ok(())
}
