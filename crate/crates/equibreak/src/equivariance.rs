//! Randomized verification of estimator equivariance.
//!
//! An estimator T declares a group family it claims to respect: moving the
//! sample by a group element g should move the estimate by the induced
//! parameter map, T(P^g) = h_g(T(P)). The checker draws random elements,
//! evaluates both sides, and measures the gap in the estimator's declared
//! parameter metric.
//!
//! Iterative estimators get their discrepancy from two solves — the default
//! start and a warm start at the expected value h_g(T(P)) — and the smaller
//! gap counts. This separates optimizer multimodality (the transformed
//! problem converging into a different local basin) from genuine
//! non-equivariance of the functional itself; both numbers are recorded.

use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::group::{GroupElement, GroupFamily, ParamMetricKind, ParameterPoint};
use crate::measure::EmpiricalMeasure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Default tolerance for estimators computed by a finite formula.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// Default tolerance for estimators computed by an iterative solver.
pub const ITERATIVE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub element: String,
    pub condition: f64,
    /// Gap when the transformed problem is solved from the default start.
    pub discrepancy_default_start: Option<f64>,
    /// Gap when solved from the warm start h_g(T(P)).
    pub discrepancy_warm_start: Option<f64>,
    /// The smaller of the two; None when both solves failed to converge.
    pub discrepancy: Option<f64>,
    /// Per-trial tolerance: the base tolerance scaled by the condition
    /// number of g (badly conditioned maps amplify roundoff legitimately).
    pub tolerance: f64,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub estimator: String,
    pub family: String,
    pub metric: String,
    pub base_tolerance: f64,
    pub seed: u64,
    pub trials: Vec<TrialOutcome>,
    pub converged_trials: usize,
    /// Largest discrepancy among converged trials.
    pub max_discrepancy: f64,
    /// True when at least one trial converged and every converged trial is
    /// within its tolerance.
    pub pass: bool,
}

/// Distance in the declared metric, with a plain euclidean fallback on the
/// flattened parameters when the metric is undefined or infinite for
/// reasons unrelated to the comparison (such as a collapsed scale measured
/// against a nearby positive one on the log scale).
fn param_distance(metric: ParamMetricKind, a: &ParameterPoint, b: &ParameterPoint) -> f64 {
    if let Ok(d) = metric.distance(a, b) {
        if d.is_finite() {
            return d;
        }
    }
    let (fa, fb) = (a.flatten(), b.flatten());
    if fa.len() != fb.len() {
        return f64::INFINITY;
    }
    fa.iter()
        .zip(&fb)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Both-sides gap for a single fixed element: solves the transformed
/// problem from the default start and from the warm start h_g(baseline),
/// returning (default-start gap, warm-start gap). A None entry means that
/// solve did not converge.
pub fn element_discrepancy(
    est: &Estimator,
    p: &EmpiricalMeasure,
    g: &GroupElement,
    baseline: &ParameterPoint,
) -> Result<(Option<f64>, Option<f64>)> {
    let moved = g.act_sample(p)?;
    let expected = g.act_parameter(baseline)?;
    let metric = est.metric();
    let solve = |start: Option<&ParameterPoint>| -> Option<f64> {
        match est.evaluate_from(&moved, start) {
            Ok(e) if e.converged => Some(param_distance(metric, &e.value, &expected)),
            _ => None,
        }
    };
    Ok((solve(None), solve(Some(&expected))))
}

/// Smallest available gap for a fixed element (for spot checks with
/// hand-picked transformations).
pub fn fixed_element_discrepancy(
    est: &Estimator,
    p: &EmpiricalMeasure,
    g: &GroupElement,
) -> Result<f64> {
    let baseline = est.evaluate(p)?;
    let (d0, d1) = element_discrepancy(est, p, g, &baseline.value)?;
    d0.into_iter()
        .chain(d1)
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.min(d)))
        })
        .ok_or(Error::NoConvergedTrials {
            op: "fixed_element_discrepancy".into(),
        })
}

/// Draw `trials` random elements of `family` (shifts scaled to the data
/// spread) and verify the equivariance identity on each. `tol` overrides
/// the per-estimator default base tolerance.
pub fn check_equivariance(
    est: &Estimator,
    family: GroupFamily,
    p: &EmpiricalMeasure,
    trials: usize,
    tol: Option<f64>,
    seed: u64,
) -> Result<EquivarianceReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument {
            what: "equivariance check needs at least one trial".into(),
        });
    }
    est.check_kind(p.kind())?;
    if !family.compatible_kind(p.kind()) {
        return Err(Error::IncompatibleAction {
            group: family.label(),
            target: p.kind().label(),
        });
    }
    let baseline = est.evaluate(p)?;
    // The family must act on the estimator's parameter variant at all.
    family.identity().act_parameter(&baseline.value)?;

    let base_tolerance = tol.unwrap_or(if est.is_closed_form() {
        CLOSED_FORM_TOL
    } else {
        ITERATIVE_TOL
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = p.coordinate_spread();
    let mut outcomes = Vec::with_capacity(trials);
    for _ in 0..trials {
        let g = family.random_element(&mut rng, spread);
        let (d_default, d_warm) = element_discrepancy(est, p, &g, &baseline.value)?;
        let discrepancy = match (d_default, d_warm) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let tolerance = base_tolerance * g.cond().max(1.0);
        outcomes.push(TrialOutcome {
            element: g.label(),
            condition: g.cond(),
            discrepancy_default_start: d_default,
            discrepancy_warm_start: d_warm,
            discrepancy,
            tolerance,
            pass: discrepancy.map(|d| d <= tolerance),
        });
    }
    let converged_trials = outcomes.iter().filter(|t| t.discrepancy.is_some()).count();
    if converged_trials == 0 {
        return Err(Error::NoConvergedTrials {
            op: "check_equivariance".into(),
        });
    }
    let max_discrepancy = outcomes
        .iter()
        .filter_map(|t| t.discrepancy)
        .fold(0.0, f64::max);
    let pass = outcomes.iter().all(|t| t.pass != Some(false));
    Ok(EquivarianceReport {
        estimator: est.name().into(),
        family: family.label(),
        metric: est.metric().label().into(),
        base_tolerance,
        seed,
        trials: outcomes,
        converged_trials,
        max_discrepancy,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::EstimatorKind;
    use crate::measure::SampleSpaceKind;
    use nalgebra::{DMatrix, DVector};

    fn uni(values: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::univariate(values).unwrap()
    }

    fn est(kind: EstimatorKind) -> Estimator {
        Estimator::new(kind)
    }

    #[test]
    fn median_is_exactly_translation_equivariant() {
        let p = uni(&[1.5, 1.8, 1.3]);
        let report = check_equivariance(
            &est(EstimatorKind::Median),
            GroupFamily::Translation { dim: 1 },
            &p,
            25,
            None,
            7,
        )
        .unwrap();
        assert!(report.pass);
        assert_eq!(report.max_discrepancy, 0.0);
        assert_eq!(report.converged_trials, 25);
    }

    #[test]
    fn location_and_scale_pass_their_declared_groups() {
        let p = uni(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        for kind in [EstimatorKind::Mean, EstimatorKind::Median] {
            for family in [
                GroupFamily::Translation { dim: 1 },
                GroupFamily::Affine { dim: 1 },
            ] {
                let r = check_equivariance(&est(kind), family, &p, 20, None, 11).unwrap();
                assert!(r.pass, "{kind:?} under {}: {r:?}", family.label());
            }
        }
        for kind in [EstimatorKind::Mad, EstimatorKind::MadStar] {
            for family in [
                GroupFamily::Translation { dim: 1 },
                GroupFamily::Affine { dim: 1 },
            ] {
                let r = check_equivariance(&est(kind), family, &p, 20, None, 13).unwrap();
                assert!(r.pass, "{kind:?} under {}: {r:?}", family.label());
            }
        }
    }

    // Asymmetric, with the minimizer strictly between the data points (a
    // minimizer sitting on a data point would be moved exactly by any
    // invertible map, hiding the shear sensitivity).
    fn planar_sample() -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.5, 0.866],
                vec![0.2, 0.9],
                vec![0.8, 0.7],
            ],
            SampleSpaceKind::Euclidean { dim: 2 },
        )
        .unwrap()
    }

    #[test]
    fn spatial_median_passes_translations_and_rotations() {
        let p = planar_sample();
        for family in [
            GroupFamily::Translation { dim: 2 },
            GroupFamily::Orthogonal { dim: 2 },
        ] {
            let r = check_equivariance(&est(EstimatorKind::L1Median), family, &p, 20, None, 17)
                .unwrap();
            assert!(r.pass, "{}: {r:?}", family.label());
            assert!(r.max_discrepancy <= 1e-6);
        }
    }

    #[test]
    fn spatial_median_fails_under_a_shear() {
        let p = planar_sample();
        let shear = GroupElement::Affine {
            mat: DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]),
            shift: DVector::zeros(2),
        };
        let d = fixed_element_discrepancy(&est(EstimatorKind::L1Median), &p, &shear).unwrap();
        assert!(d > 1e-3, "shear discrepancy {d}");
    }

    #[test]
    fn saturating_fit_passes_carrier_rescaling() {
        let p = EmpiricalMeasure::from_points(
            vec![vec![1.0, 0.5], vec![2.0, 2.0 / 3.0], vec![4.0, 0.8]],
            SampleSpaceKind::PositiveCarrier,
        )
        .unwrap();
        let r = check_equivariance(
            &est(EstimatorKind::MichaelisMentenFit),
            GroupFamily::ScaleX,
            &p,
            20,
            None,
            23,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_discrepancy <= 1e-5, "{}", r.max_discrepancy);
    }

    fn logistic_sample() -> EmpiricalMeasure {
        let xs = [-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5];
        let ys = [0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0];
        EmpiricalMeasure::from_points(
            xs.iter().zip(&ys).map(|(&x, &y)| vec![y, x]).collect(),
            SampleSpaceKind::BinaryResponse { covariate_dim: 1 },
        )
        .unwrap()
    }

    #[test]
    fn regularized_logistic_passes_label_flips_and_covariate_maps() {
        let p = logistic_sample();
        let r = check_equivariance(
            &est(EstimatorKind::LogisticRegularized),
            GroupFamily::BinaryResponse { covariate_dim: 1 },
            &p,
            20,
            None,
            29,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn constant_zero_passes_every_binary_trial() {
        let p = logistic_sample();
        let r = check_equivariance(
            &est(EstimatorKind::ConstantZeroLogistic),
            GroupFamily::BinaryResponse { covariate_dim: 1 },
            &p,
            30,
            None,
            31,
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.max_discrepancy, 0.0);
    }

    #[test]
    fn origin_regression_passes_carrier_shifts() {
        let p = EmpiricalMeasure::from_points(
            (0..6)
                .map(|i| vec![1.0 + 0.5 * i as f64, 0.4 * i as f64 - 1.0])
                .collect(),
            SampleSpaceKind::RegressionPair { carrier_dim: 1 },
        )
        .unwrap();
        let r = check_equivariance(
            &est(EstimatorKind::LsOrigin),
            GroupFamily::RegressionCarrier { carrier_dim: 1 },
            &p,
            20,
            None,
            37,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn clamped_regression_is_not_carrier_equivariant() {
        // The clamp to [-n, n] deliberately trades equivariance away.
        let points: Vec<Vec<f64>> = vec![vec![1.0, 30.0], vec![2.0, 70.0], vec![3.0, 80.0]];
        let p = EmpiricalMeasure::from_points(
            points,
            SampleSpaceKind::RegressionPair { carrier_dim: 1 },
        )
        .unwrap();
        let g = GroupElement::RegressionCarrier {
            adjust: DVector::from_column_slice(&[-10.0]),
        };
        let d = fixed_element_discrepancy(&est(EstimatorKind::LsOriginBounded), &p, &g).unwrap();
        assert!(d > 1e-3, "clamped discrepancy {d}");
    }

    #[test]
    fn rejects_incompatible_combinations() {
        let p = uni(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            check_equivariance(
                &est(EstimatorKind::Median),
                GroupFamily::ScaleX,
                &p,
                5,
                None,
                1
            ),
            Err(Error::IncompatibleAction { .. })
        ));
        assert!(check_equivariance(
            &est(EstimatorKind::Median),
            GroupFamily::Translation { dim: 1 },
            &p,
            0,
            None,
            1
        )
        .is_err());
    }

    #[test]
    fn reports_are_deterministic_per_seed() {
        let p = planar_sample();
        let run = || {
            check_equivariance(
                &est(EstimatorKind::L1Median),
                GroupFamily::Translation { dim: 2 },
                &p,
                10,
                None,
                41,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
