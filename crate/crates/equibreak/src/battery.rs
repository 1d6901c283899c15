//! Built-in reference samples and the self-check battery.
//!
//! Every dataset the library's headline behaviors are calibrated against is
//! embedded here as a constant constructor, so the full battery runs with
//! no external files (the CLI exposes it as the `replicate` command). Each
//! check compares an observed quantity against its expected value and
//! reports a pass flag; the expected values are frozen from independent
//! hand computation.

use crate::breakdown::{self, diverges, fsbp_search, ContaminationPlan, TraceStatus};
use crate::degeneracy;
use crate::equivariance::{check_equivariance, fixed_element_discrepancy};
use crate::error::Error;
use crate::estimators::{Estimator, EstimatorKind};
use crate::group::{GroupElement, GroupFamily, ParamMetricKind, ParameterPoint};
use crate::measure::{mix, EmpiricalMeasure, ProbMetricKind, SampleSpaceKind};
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::fmt::Display;
use std::time::Instant;

/// One named comparison between an expected and an observed value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

fn check(name: &str, expected: impl Display, observed: impl Display, pass: bool) -> Check {
    Check {
        name: name.into(),
        expected: expected.to_string(),
        observed: observed.to_string(),
        pass,
    }
}

fn fail(name: &str, expected: impl Display, err: impl Display) -> Check {
    check(name, expected, format!("error: {err}"), false)
}

pub fn all_pass(checks: &[Check]) -> bool {
    !checks.is_empty() && checks.iter().all(|c| c.pass)
}

// ---------------------------------------------------------------------------
// Built-in samples.
// ---------------------------------------------------------------------------

pub mod samples {
    use super::*;

    fn uni(values: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::univariate(values).expect("built-in sample is valid")
    }

    /// Six points with three duplicated values.
    pub fn six_point() -> EmpiricalMeasure {
        uni(&[1.5, 1.8, 1.3, 1.5, 1.8, 1.3])
    }

    /// Three distinct points.
    pub fn three_point() -> EmpiricalMeasure {
        uni(&[1.5, 1.8, 1.3])
    }

    /// Tie-heavy sample: the plain interval-width scale collapses here.
    pub fn tie_heavy() -> EmpiricalMeasure {
        uni(&[0.0, 0.0, 0.0, 1.0, 2.0])
    }

    /// Five distinct equally spaced points.
    pub fn distinct_five() -> EmpiricalMeasure {
        uni(&[1.0, 2.0, 3.0, 4.0, 5.0])
    }

    /// Ten distinct points, frozen.
    pub fn ten_point() -> EmpiricalMeasure {
        uni(&[0.8, -1.3, 2.4, 0.05, 1.9, -0.7, 3.2, 1.1, -2.6, 0.4])
    }

    /// Location battery: one sample per size in {3, 5, 6, 10}.
    pub fn location_battery() -> Vec<EmpiricalMeasure> {
        vec![three_point(), distinct_five(), six_point(), ten_point()]
    }

    /// Generic planar six-point cloud.
    pub fn planar_six() -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.2],
                vec![0.3, 1.0],
                vec![-0.8, 0.4],
                vec![0.1, -0.9],
                vec![-0.5, -0.6],
            ],
            SampleSpaceKind::Euclidean { dim: 2 },
        )
        .expect("built-in sample is valid")
    }

    /// Asymmetric planar five-point cloud whose spatial median falls
    /// strictly between the data points — the witness for shear
    /// non-equivariance.
    pub fn shear_witness() -> EmpiricalMeasure {
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
        .expect("built-in sample is valid")
    }

    /// General-position binary sample: 8 distinct covariates, responses
    /// not separable.
    pub fn logistic_eight() -> EmpiricalMeasure {
        let xs = [-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5];
        let ys = [0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0];
        EmpiricalMeasure::from_points(
            xs.iter().zip(&ys).map(|(&x, &y)| vec![y, x]).collect(),
            SampleSpaceKind::BinaryResponse { covariate_dim: 1 },
        )
        .expect("built-in sample is valid")
    }

    /// Generic trend sample: 7 distinct times, every response strictly
    /// inside (0, 1), lying on a smooth saturation curve.
    pub fn growth_seven() -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            (-3..=3)
                .map(|t| {
                    let t = t as f64;
                    vec![crate::estimators::sigmoid(0.5 * t), t]
                })
                .collect(),
            SampleSpaceKind::TimePair,
        )
        .expect("built-in sample is valid")
    }

    /// Saturation data lying exactly on the unit-parameter curve
    /// y = x/(x + 1).
    pub fn saturation_exact() -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            vec![vec![1.0, 0.5], vec![2.0, 2.0 / 3.0], vec![4.0, 0.8]],
            SampleSpaceKind::PositiveCarrier,
        )
        .expect("built-in sample is valid")
    }

    /// The same responses with the carrier quadrupled.
    pub fn saturation_x4() -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            vec![vec![4.0, 0.5], vec![8.0, 2.0 / 3.0], vec![16.0, 0.8]],
            SampleSpaceKind::PositiveCarrier,
        )
        .expect("built-in sample is valid")
    }

    /// Regression sample in general position for the bounded-slope fit.
    pub fn regression_eight() -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            (0..8)
                .map(|i| vec![(i as f64 - 3.5) * 0.5, i as f64 * 0.3 - 1.0])
                .collect(),
            SampleSpaceKind::RegressionPair { carrier_dim: 1 },
        )
        .expect("built-in sample is valid")
    }

    /// Consistency design: 2m points at x = 0 and m points at x = 1, with
    /// y standard normal plus slope 1 at x = 1.
    pub fn referee_design(m: usize, seed: u64) -> EmpiricalMeasure {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(3 * m);
        for _ in 0..2 * m {
            let noise: f64 = rng.sample(StandardNormal);
            points.push(vec![0.0, noise]);
        }
        for _ in 0..m {
            let noise: f64 = rng.sample(StandardNormal);
            points.push(vec![1.0, 1.0 + noise]);
        }
        EmpiricalMeasure::from_points(points, SampleSpaceKind::RegressionPair { carrier_dim: 1 })
            .expect("built-in sample is valid")
    }

    /// The two built-in contamination paths for the median: three of the
    /// six points walk downward together (the second path nudges one
    /// starting value by 0.01, which changes nothing for the median).
    pub fn median_path_samples(lambda: f64) -> (EmpiricalMeasure, EmpiricalMeasure) {
        let a = uni(&[1.5, 1.8, 1.3, 1.5 - lambda, 1.8 - lambda, 1.3 - lambda]);
        let b = uni(&[1.5, 1.8, 1.3, 1.51 - lambda, 1.8 - lambda, 1.3 - lambda]);
        (a, b)
    }
}

// ---------------------------------------------------------------------------
// Criterion check groups.
// ---------------------------------------------------------------------------

fn est(kind: EstimatorKind) -> Estimator {
    Estimator::new(kind)
}

fn fmt_frac(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.6}"),
        None => "none".into(),
    }
}

/// Median breakdown on the six-point sample: search, closed form, and
/// degeneracy bound all give 3/6.
pub fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let p = samples::six_point();
    let mut out = Vec::new();
    let plan = match ContaminationPlan::default_for(&p) {
        Ok(p) => p,
        Err(e) => return vec![fail("median six-point: plan", "plan built", e)],
    };
    match fsbp_search(&est(EstimatorKind::Median), &p, &plan, 4) {
        Ok(r) => {
            out.push(check(
                "median six-point: smallest breaking k",
                "3",
                fmt_opt(r.k_break),
                r.k_break == Some(3),
            ));
            out.push(check(
                "median six-point: closed-form fraction",
                "0.5",
                fmt_frac(r.closed_form),
                r.closed_form == Some(0.5),
            ));
            out.push(check(
                "median six-point: degeneracy bound",
                "0.5",
                fmt_frac(r.upper.value()),
                r.upper.value() == Some(0.5),
            ));
            out.push(check(
                "median six-point: search agrees with both",
                "lower = closed form = bound",
                format!(
                    "{} / {} / {}",
                    fmt_frac(r.fsbp_lower),
                    fmt_frac(r.closed_form),
                    fmt_frac(r.upper.value())
                ),
                r.fsbp_lower == r.closed_form && r.fsbp_lower == r.upper.value(),
            ));
        }
        Err(e) => out.push(fail("median six-point: search", "k_break = 3", e)),
    }
    let elapsed = start.elapsed();
    out.push(check(
        "median six-point: runtime",
        "< 1 s",
        format!("{:.3} s", elapsed.as_secs_f64()),
        elapsed.as_secs_f64() < 1.0,
    ));
    out
}

fn fmt_opt<T: Display>(v: Option<T>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "none".into(),
    }
}

/// The mean breaks at a single replacement on every battery sample.
pub fn criterion_2() -> Vec<Check> {
    let mut out = Vec::new();
    for p in samples::location_battery() {
        let n = p.len();
        let name = format!("mean n={n}: smallest breaking k");
        let plan = match ContaminationPlan::default_for(&p) {
            Ok(p) => p,
            Err(e) => {
                out.push(fail(&name, "1", e));
                continue;
            }
        };
        match fsbp_search(&est(EstimatorKind::Mean), &p, &plan, 2) {
            Ok(r) => out.push(check(&name, "1", fmt_opt(r.k_break), r.k_break == Some(1))),
            Err(e) => out.push(fail(&name, "1", e)),
        }
    }
    out
}

/// Collapsed scale on the tie-heavy sample: value 0, infinitely far from
/// any positive scale, closed-form breakdown fraction 0.
pub fn criterion_3() -> Vec<Check> {
    let p = samples::tie_heavy();
    let mut out = Vec::new();
    match est(EstimatorKind::Mad).evaluate(&p) {
        Ok(e) => {
            out.push(check(
                "scale on ties: value",
                "0",
                format!("{:?}", e.value.flatten()),
                e.value == ParameterPoint::Scale { value: 0.0 },
            ));
            let all_infinite = [0.5, 1.0, 7.3].iter().all(|&s| {
                ParamMetricKind::ScaleLog
                    .distance(&e.value, &ParameterPoint::Scale { value: s })
                    .map(|d| d == f64::INFINITY)
                    .unwrap_or(false)
            });
            out.push(check(
                "scale on ties: log distance to positive scales",
                "+inf",
                if all_infinite { "+inf" } else { "finite" },
                all_infinite,
            ));
        }
        Err(e) => out.push(fail("scale on ties: value", "0", e)),
    }
    match breakdown::closed_form_fsbp(&est(EstimatorKind::Mad), &p) {
        Ok(cf) => out.push(check(
            "scale on ties: closed-form fraction",
            "0",
            fmt_frac(cf),
            cf == Some(0.0),
        )),
        Err(e) => out.push(fail("scale on ties: closed-form fraction", "0", e)),
    }
    out
}

/// The widened-interval scale attains its bound: value 1 on the tie-heavy
/// sample, one-point implosion break with the expected witness, and the
/// 2/5 bound met at two points on the tie-free sample.
pub fn criterion_4() -> Vec<Check> {
    let start = Instant::now();
    let mut out = Vec::new();
    let p = samples::tie_heavy();
    match est(EstimatorKind::MadStar).evaluate(&p) {
        Ok(e) => out.push(check(
            "robust scale on ties: value",
            "1",
            format!("{:?}", e.value.flatten()),
            e.value == ParameterPoint::Scale { value: 1.0 },
        )),
        Err(e) => out.push(fail("robust scale on ties: value", "1", e)),
    }
    let plan = ContaminationPlan::default_for(&p).expect("plan for built-in sample");
    match fsbp_search(&est(EstimatorKind::MadStar), &p, &plan, 3) {
        Ok(r) => {
            out.push(check(
                "robust scale on ties: bound",
                "0.2",
                fmt_frac(r.upper.value()),
                r.upper.value() == Some(0.2),
            ));
            out.push(check(
                "robust scale on ties: smallest breaking k",
                "1",
                fmt_opt(r.k_break),
                r.k_break == Some(1),
            ));
            let witness_ok = r
                .witness
                .as_ref()
                .map(|w| {
                    let mut vals: Vec<f64> = w.final_sample.iter().map(|pt| pt[0]).collect();
                    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let delta = 1.0 / w.final_lambda;
                    vals[0] == 0.0
                        && vals[1] == 0.0
                        && vals[2] == 0.0
                        && vals[3] == delta
                        && vals[4] == 2.0
                })
                .unwrap_or(false);
            out.push(check(
                "robust scale on ties: witness sample",
                "{0,0,0,delta,2}",
                if witness_ok {
                    "matched".to_string()
                } else {
                    format!("{:?}", r.witness.map(|w| w.final_sample))
                },
                witness_ok,
            ));
        }
        Err(e) => out.push(fail("robust scale on ties: search", "k_break = 1", e)),
    }
    let q = samples::distinct_five();
    let plan = ContaminationPlan::default_for(&q).expect("plan for built-in sample");
    match fsbp_search(&est(EstimatorKind::MadStar), &q, &plan, 3) {
        Ok(r) => {
            out.push(check(
                "robust scale tie-free: bound",
                "0.4",
                fmt_frac(r.upper.value()),
                r.upper.value() == Some(0.4),
            ));
            out.push(check(
                "robust scale tie-free: smallest breaking k",
                "2",
                fmt_opt(r.k_break),
                r.k_break == Some(2),
            ));
        }
        Err(e) => out.push(fail("robust scale tie-free: search", "k_break = 2", e)),
    }
    let elapsed = start.elapsed();
    out.push(check(
        "robust scale: runtime",
        "< 5 s",
        format!("{:.3} s", elapsed.as_secs_f64()),
        elapsed.as_secs_f64() < 5.0,
    ));
    out
}

/// Every search result with an applicable degeneracy bound satisfies
/// lower <= bound (also enforced as a hard assertion inside the engine).
pub fn criterion_5() -> Vec<Check> {
    let mut combos: Vec<(Estimator, EmpiricalMeasure, String)> = Vec::new();
    for p in samples::location_battery() {
        combos.push((
            est(EstimatorKind::Mean),
            p.clone(),
            format!("mean on n={}", p.len()),
        ));
        combos.push((
            est(EstimatorKind::Median),
            p.clone(),
            format!("median on n={}", p.len()),
        ));
    }
    for (label, p) in [
        ("ties", samples::tie_heavy()),
        ("tie-free", samples::distinct_five()),
        ("three-point", samples::three_point()),
        ("six-point", samples::six_point()),
    ] {
        combos.push((
            est(EstimatorKind::Mad),
            p.clone(),
            format!("plain scale on {label}"),
        ));
        combos.push((
            est(EstimatorKind::MadStar),
            p,
            format!("robust scale on {label}"),
        ));
    }
    combos.push((
        est(EstimatorKind::L1Median),
        samples::planar_six(),
        "spatial median on planar six".into(),
    ));
    combos.push((
        est(EstimatorKind::L1Median),
        samples::three_point(),
        "spatial median on three-point".into(),
    ));
    combos.push((
        est(EstimatorKind::MichaelisMentenFit),
        samples::saturation_exact(),
        "saturating fit on exact data".into(),
    ));
    combos.push((
        est(EstimatorKind::MichaelisMentenFit),
        samples::saturation_x4(),
        "saturating fit on rescaled data".into(),
    ));

    let mut out = Vec::new();
    let mut verified = 0usize;
    for (e, p, label) in &combos {
        let name = format!("bound safety: {label}");
        let plan = match ContaminationPlan::default_for(p) {
            Ok(plan) => plan,
            Err(err) => {
                out.push(fail(&name, "lower <= bound", err));
                continue;
            }
        };
        match fsbp_search(e, p, &plan, p.len()) {
            Ok(r) => match (r.fsbp_lower, r.upper.value()) {
                (Some(lower), Some(bound)) => {
                    verified += 1;
                    out.push(check(
                        &name,
                        "lower <= bound",
                        format!("{lower:.4} <= {bound:.4}"),
                        lower <= bound + 1e-12,
                    ));
                }
                (None, Some(bound)) => {
                    verified += 1;
                    out.push(check(
                        &name,
                        "lower <= bound",
                        format!("no break found <= {bound:.4}"),
                        true,
                    ));
                }
                _ => out.push(check(&name, "bound applies", "no bound", false)),
            },
            Err(err) => out.push(fail(&name, "lower <= bound", err)),
        }
    }
    out.push(check(
        "bound safety: combinations verified",
        ">= 20",
        verified,
        verified >= 20,
    ));
    out
}

/// The clamped slope never diverges, stays within its clamp on random
/// contaminated data, and is consistent on the two-level design.
pub fn criterion_6() -> Vec<Check> {
    let mut out = Vec::new();
    let p = samples::regression_eight();
    let plan = ContaminationPlan::default_for(&p).expect("plan for built-in sample");
    match fsbp_search(&est(EstimatorKind::LsOriginBounded), &p, &plan, p.len()) {
        Ok(r) => out.push(check(
            "clamped slope: divergence up to k = n",
            "none",
            fmt_opt(r.k_break),
            r.k_break.is_none(),
        )),
        Err(e) => out.push(fail("clamped slope: divergence up to k = n", "none", e)),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6bdd);
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0usize;
    let trials = 10_000;
    for _ in 0..trials {
        let n = rng.random_range(2..=12usize);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let heavy_x = rng.random_range(0..10) == 0;
                let heavy_y = rng.random_range(0..10) == 0;
                let x: f64 = rng.sample::<f64, _>(StandardNormal) * if heavy_x { 1e8 } else { 1.0 };
                let y: f64 = rng.sample::<f64, _>(StandardNormal) * if heavy_y { 1e8 } else { 2.0 };
                vec![x, y]
            })
            .collect();
        let sample = EmpiricalMeasure::from_points(
            points,
            SampleSpaceKind::RegressionPair { carrier_dim: 1 },
        )
        .expect("random sample is valid");
        match est(EstimatorKind::LsOriginBounded).evaluate(&sample) {
            Ok(e) => {
                let v = e.value.flatten()[0].abs();
                max_ratio = max_ratio.max(v / n as f64);
                if v > n as f64 {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }
    out.push(check(
        "clamped slope: |T| <= n on random contaminated samples",
        format!("0 violations in {trials}"),
        format!("{violations} violations, max |T|/n = {max_ratio:.3}"),
        violations == 0,
    ));

    let mut errors = Vec::new();
    for (i, m) in [10usize, 100, 1000].iter().enumerate() {
        let design = samples::referee_design(*m, 0x5eed + i as u64);
        match est(EstimatorKind::LsOriginBounded).evaluate(&design) {
            Ok(e) => errors.push((*m, (e.value.flatten()[0] - 1.0).abs())),
            Err(err) => {
                out.push(fail("clamped slope: consistency", "errors shrink", err));
                return out;
            }
        }
    }
    let final_error = errors.last().map(|&(_, e)| e).unwrap_or(f64::INFINITY);
    let shrinking = errors[0].1 >= errors[2].1;
    out.push(check(
        "clamped slope: consistency on the two-level design",
        "error at m=1000 below 0.15 and shrinking",
        format!(
            "errors {}",
            errors
                .iter()
                .map(|(m, e)| format!("m={m}: {e:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        final_error < 0.15 && shrinking,
    ));
    out
}

/// The penalized logistic fit survives heavy replacement with bounded
/// parameters and passes its group checks.
pub fn criterion_7() -> Vec<Check> {
    let mut out = Vec::new();
    let p = samples::logistic_eight();
    let plan = ContaminationPlan::default_for(&p).expect("plan for built-in sample");
    match fsbp_search(&est(EstimatorKind::LogisticRegularized), &p, &plan, 6) {
        Ok(r) => {
            out.push(check(
                "penalized logistic: divergence up to k = 6",
                "none",
                fmt_opt(r.k_break),
                r.k_break.is_none(),
            ));
            out.push(check(
                "penalized logistic: parameter norm across ladder",
                "< 1e3",
                format!("{:.3}", r.max_parameter_norm),
                r.max_parameter_norm < 1e3,
            ));
        }
        Err(e) => out.push(fail("penalized logistic: search", "no divergence", e)),
    }
    match check_equivariance(
        &est(EstimatorKind::LogisticRegularized),
        GroupFamily::BinaryResponse { covariate_dim: 1 },
        &p,
        50,
        Some(1e-6),
        0x10615,
    ) {
        Ok(r) => out.push(check(
            "penalized logistic: response-flip and covariate-map trials",
            "50 trials pass at 1e-6",
            format!(
                "{} converged, max discrepancy {:.3e}",
                r.converged_trials, r.max_discrepancy
            ),
            r.pass && r.converged_trials == 50,
        )),
        Err(e) => out.push(fail(
            "penalized logistic: response-flip and covariate-map trials",
            "pass",
            e,
        )),
    }
    out
}

/// The trend fit survives until only one informative point remains, then
/// breaks by response separation.
pub fn criterion_8() -> Vec<Check> {
    let mut out = Vec::new();
    let p = samples::growth_seven();
    let plan = ContaminationPlan::default_for(&p).expect("plan for built-in sample");
    match fsbp_search(&est(EstimatorKind::GrowthFit), &p, &plan, 6) {
        Ok(r) => {
            out.push(check(
                "trend fit: smallest breaking k",
                "6 (none below)",
                fmt_opt(r.k_break),
                r.k_break == Some(6),
            ));
            let separation = r
                .witness
                .as_ref()
                .map(|w| w.trace.iter().any(|t| t.status == TraceStatus::Unbounded))
                .unwrap_or(false);
            out.push(check(
                "trend fit: break mechanism",
                "unattained fit (response separation)",
                if separation {
                    "unattained fit".into()
                } else {
                    format!("{:?}", r.witness.as_ref().map(|w| &w.trace))
                },
                separation,
            ));
            // Hand check of the classifier on the witness sample itself.
            let manual = r.witness.as_ref().map(|w| {
                let sample = EmpiricalMeasure::from_points(
                    w.final_sample.clone(),
                    SampleSpaceKind::TimePair,
                )
                .expect("witness sample is valid");
                matches!(
                    est(EstimatorKind::GrowthFit).evaluate(&sample),
                    Err(Error::UnboundedFit { .. })
                )
            });
            out.push(check(
                "trend fit: classifier agrees on the witness sample",
                "unbounded",
                fmt_opt(manual.map(|b| if b { "unbounded" } else { "bounded" })),
                manual == Some(true),
            ));
        }
        Err(e) => out.push(fail("trend fit: search", "k_break = 6", e)),
    }
    out
}

/// The saturating fit recovers exact parameters, transforms correctly
/// under carrier rescaling, and reports the zero-degeneracy bound.
pub fn criterion_9() -> Vec<Check> {
    let mut out = Vec::new();
    let close = |v: &ParameterPoint, a: f64, c: f64| -> bool {
        let f = v.flatten();
        (f[0] - a).abs() < 1e-6 && (f[1] - c).abs() < 1e-6
    };
    match est(EstimatorKind::MichaelisMentenFit).evaluate(&samples::saturation_exact()) {
        Ok(e) => out.push(check(
            "saturating fit: exact data",
            "(1, 1) within 1e-6",
            format!("{:?}", e.value.flatten()),
            close(&e.value, 1.0, 1.0),
        )),
        Err(e) => out.push(fail("saturating fit: exact data", "(1, 1)", e)),
    }
    match est(EstimatorKind::MichaelisMentenFit).evaluate(&samples::saturation_x4()) {
        Ok(e) => out.push(check(
            "saturating fit: carrier quadrupled",
            "(0.5, 0.5) within 1e-6",
            format!("{:?}", e.value.flatten()),
            close(&e.value, 0.5, 0.5),
        )),
        Err(e) => out.push(fail("saturating fit: carrier quadrupled", "(0.5, 0.5)", e)),
    }
    let p = samples::saturation_exact();
    match degeneracy::bound_for(&p, &GroupFamily::ScaleX, ParamMetricKind::MichaelisMenten) {
        Ok((delta, outcome)) => {
            out.push(check(
                "saturating fit: degenerate mass",
                "0",
                format!("{}", delta.value),
                delta.value == 0.0,
            ));
            let bound = outcome.fsbp_bound();
            out.push(check(
                "saturating fit: reported bound",
                "2/3",
                fmt_frac(bound),
                bound == Some(2.0 / 3.0),
            ));
        }
        Err(e) => out.push(fail("saturating fit: bound", "2/3", e)),
    }
    out
}

/// The spatial median agrees with the univariate median, shifts exactly,
/// breaks at half on the planar cloud, and fails under shear.
pub fn criterion_10() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let mut max_gap: f64 = 0.0;
    for _ in 0..100 {
        let n = 2 * rng.random_range(1..=7usize) + 1;
        let values: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * 10.0)
            .collect();
        let p = EmpiricalMeasure::univariate(&values).expect("random sample is valid");
        let a = est(EstimatorKind::L1Median).evaluate(&p);
        let b = est(EstimatorKind::Median).evaluate(&p);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                max_gap = max_gap.max((a.value.flatten()[0] - b.value.flatten()[0]).abs());
            }
            _ => max_gap = f64::INFINITY,
        }
    }
    out.push(check(
        "spatial median: univariate agreement with the median",
        "within 1e-10 on 100 odd-size samples",
        format!("max gap {max_gap:.3e}"),
        max_gap <= 1e-10,
    ));
    match check_equivariance(
        &est(EstimatorKind::L1Median),
        GroupFamily::Translation { dim: 2 },
        &samples::planar_six(),
        100,
        Some(1e-8),
        0x21,
    ) {
        Ok(r) => out.push(check(
            "spatial median: translation trials",
            "100 trials pass at 1e-8",
            format!(
                "{} converged, max discrepancy {:.3e}",
                r.converged_trials, r.max_discrepancy
            ),
            r.pass && r.converged_trials == 100,
        )),
        Err(e) => out.push(fail("spatial median: translation trials", "pass", e)),
    }
    let p = samples::planar_six();
    let plan = ContaminationPlan::default_for(&p).expect("plan for built-in sample");
    match fsbp_search(&est(EstimatorKind::L1Median), &p, &plan, 3) {
        Ok(r) => out.push(check(
            "spatial median: smallest breaking k on planar six",
            "3",
            fmt_opt(r.k_break),
            r.k_break == Some(3),
        )),
        Err(e) => out.push(fail(
            "spatial median: smallest breaking k on planar six",
            "3",
            e,
        )),
    }
    let shear = GroupElement::Affine {
        mat: DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]),
        shift: DVector::zeros(2),
    };
    match fixed_element_discrepancy(
        &est(EstimatorKind::L1Median),
        &samples::shear_witness(),
        &shear,
    ) {
        Ok(d) => out.push(check(
            "spatial median: shear discrepancy",
            "> 1e-3",
            format!("{d:.4}"),
            d > 1e-3,
        )),
        Err(e) => out.push(fail("spatial median: shear discrepancy", "> 1e-3", e)),
    }
    out
}

/// Distribution-metric axioms hold on random triples at 1e-12.
pub fn criterion_11() -> Vec<Check> {
    let metrics = [
        ProbMetricKind::TotalVariation,
        ProbMetricKind::Kuiper { intervals: 1 },
        ProbMetricKind::Kuiper { intervals: 2 },
        ProbMetricKind::Kuiper { intervals: 3 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xd157);
    let tol = 1e-12;
    let mut out = Vec::new();
    let random_measure = |rng: &mut ChaCha8Rng| -> EmpiricalMeasure {
        let n = rng.random_range(1..=6usize);
        // A small shared alphabet keeps coincidences (and the interesting
        // tie cases) frequent.
        let values: Vec<f64> = (0..n)
            .map(|_| (rng.random_range(0..8) as f64) * 0.5 - 1.5)
            .collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0f64)).collect();
        let total: f64 = weights.iter().sum();
        EmpiricalMeasure::new(
            values.iter().map(|&v| vec![v]).collect(),
            weights.iter().map(|w| w / total).collect(),
            SampleSpaceKind::Euclidean { dim: 1 },
        )
        .expect("random measure is valid")
    };
    for metric in metrics {
        let mut worst: f64 = 0.0;
        let mut failures = 0usize;
        for _ in 0..1000 {
            let p = random_measure(&mut rng);
            let q = random_measure(&mut rng);
            let r = random_measure(&mut rng);
            let d = |a: &EmpiricalMeasure, b: &EmpiricalMeasure| -> f64 {
                crate::measure::prob_distance(metric, a, b).expect("metric defined")
            };
            let dpq = d(&p, &q);
            let dqp = d(&q, &p);
            let dpp = d(&p, &p);
            let dpr = d(&p, &r);
            let dqr = d(&q, &r);
            // Identity, symmetry, range, triangle inequality.
            let mut bad = dpp.abs() > tol
                || (dpq - dqp).abs() > tol
                || !(0.0..=1.0 + tol).contains(&dpq)
                || dpr > dpq + dqr + tol;
            worst = worst
                .max(dpp.abs())
                .max((dpq - dqp).abs())
                .max(dpr - (dpq + dqr));
            // Mixture contraction: blending a common head shrinks distance
            // to at most the tail weight.
            let alpha = rng.random_range(0.05..0.95f64);
            let m1 = mix(&p, &q, alpha).expect("mixture is valid");
            let m2 = mix(&p, &r, alpha).expect("mixture is valid");
            let dm = d(&m1, &m2);
            if dm > (1.0 - alpha) + tol {
                bad = true;
            }
            worst = worst.max(dm - (1.0 - alpha));
            if bad {
                failures += 1;
            }
        }
        out.push(check(
            &format!("metric axioms: {}", metric.label()),
            "1000 random triples pass at 1e-12",
            format!("{failures} failures, worst slack {worst:.3e}"),
            failures == 0,
        ));
    }
    out
}

/// Both built-in walking-contamination paths drive the median's trace to
/// divergence.
pub fn criterion_12() -> Vec<Check> {
    let ladder = ContaminationPlan::ladder_to_exp(12);
    let median = est(EstimatorKind::Median);
    let baseline = match median.evaluate(&samples::six_point()) {
        Ok(e) => e.value,
        Err(e) => return vec![fail("median paths: baseline", "1.5", e)],
    };
    let mut traces: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for &lambda in &ladder {
        let (a, b) = samples::median_path_samples(lambda);
        for (trace, sample) in traces.iter_mut().zip([&a, &b]) {
            if let Ok(e) = median.evaluate(sample) {
                if let Ok(d) = ParamMetricKind::Euclidean.distance(&baseline, &e.value) {
                    trace.push((lambda, d));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (trace, label) in traces.iter().zip(["first", "second"]) {
        let verdict = diverges(trace, false);
        out.push(check(
            &format!("median {label} walking path: trace diverges"),
            "true",
            format!("{verdict:?}"),
            verdict == Ok(true),
        ));
    }
    out
}

/// All criterion groups in order, for the `replicate` command.
pub fn run_all() -> Vec<Check> {
    let groups: [fn() -> Vec<Check>; 12] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
    ];
    groups.iter().flat_map(|g| g()).collect()
}

/// One criterion group by 1-based index.
pub fn criterion(index: usize) -> Vec<Check> {
    match index {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        _ => vec![check("criterion index", "1..=12", index, false)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breakdown::{contamination_breakdown, default_epsilon_grid};

    #[test]
    fn contamination_grid_examples_hold() {
        // Mixture attacks certify upper bounds at the expected grid values:
        // the mean at the smallest grid weight, the median at one half.
        let p = samples::distinct_five();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let grid = default_epsilon_grid();
        let mean = contamination_breakdown(
            &est(EstimatorKind::Mean),
            &p,
            ProbMetricKind::TotalVariation,
            &plan,
            &grid,
        )
        .unwrap();
        assert_eq!(mean.first_diverging_epsilon, Some(0.05));
        let median = contamination_breakdown(
            &est(EstimatorKind::Median),
            &p,
            ProbMetricKind::TotalVariation,
            &plan,
            &grid,
        )
        .unwrap();
        assert!((median.first_diverging_epsilon.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn battery_samples_are_valid() {
        assert_eq!(samples::six_point().len(), 6);
        assert_eq!(samples::ten_point().len(), 10);
        assert_eq!(samples::planar_six().len(), 6);
        assert_eq!(samples::logistic_eight().len(), 8);
        assert_eq!(samples::growth_seven().len(), 7);
        assert_eq!(samples::referee_design(10, 1).len(), 30);
        let (a, b) = samples::median_path_samples(10.0);
        assert_eq!(a.len(), 6);
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn quick_criteria_pass() {
        // The fast criterion groups are exercised directly here; the heavy
        // ones run in the dedicated acceptance suite.
        for idx in [1usize, 2, 3, 9, 12] {
            let checks = criterion(idx);
            assert!(
                all_pass(&checks),
                "group {idx}: {:#?}",
                checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn unknown_criterion_index_fails_closed() {
        assert!(!all_pass(&criterion(13)));
        assert!(!all_pass(&[]));
    }
}
