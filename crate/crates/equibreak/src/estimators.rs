//! Statistical functionals: pure maps from an empirical measure to a
//! parameter point.
//!
//! Each estimator declares the group family it claims equivariance under
//! (checked numerically by [`crate::equivariance`]) and the parameter metric
//! its breakdown is measured in. Two functionals are deliberately
//! *non*-equivariant reference points: the clamped least-squares slope
//! (bounded, so it never breaks down) and the constant-zero classifier (a
//! self-check for the equivariance tester).
//!
//! Iterative fits report their solver state instead of failing: an
//! [`Estimate`] carries the best iterate with `converged = false` when an
//! iteration cap was hit. Hard errors are reserved for structural problems —
//! wrong sample kind, unidentifiable data, or an objective whose infimum is
//! not attained (`UnboundedFit`, which the breakdown engine treats as
//! divergence evidence).

use crate::error::{Error, Result};
use crate::fit::{self, FitOptions};
use crate::group::{GroupElement, GroupFamily, ParamMetricKind, ParameterPoint};
use crate::measure::{lower_weighted_median, EmpiricalMeasure, SampleSpaceKind};
use nalgebra::{DMatrix, DVector};

/// Stable logistic function.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Clamp a response into [0, 1].
pub fn clip01(y: f64) -> f64 {
    y.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Mean,
    Median,
    Mad,
    MadStar,
    L1Median,
    LsOrigin,
    LsOriginBounded,
    LogisticRegularized,
    ConstantZeroLogistic,
    GrowthFit,
    MichaelisMentenFit,
}

/// A configured estimator. `epsilon` is the score-penalty weight of the
/// regularized logistic fit; other estimators ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimator {
    pub kind: EstimatorKind,
    pub epsilon: f64,
}

/// Result of one evaluation: the fitted parameter plus solver diagnostics.
/// Closed-form estimators always converge with zero residual.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value: ParameterPoint,
    pub converged: bool,
    pub iterations: usize,
    /// Gradient norm at the returned point for smooth fits, last step size
    /// for fixed-point iterations, 0 for closed forms.
    pub residual: f64,
    pub objective: Option<f64>,
    /// Multistart minima tied with the best within 1e-9 (reported, not
    /// resolved).
    pub tied_starts: usize,
}

impl Estimate {
    fn closed(value: ParameterPoint) -> Self {
        Estimate {
            value,
            converged: true,
            iterations: 0,
            residual: 0.0,
            objective: None,
            tied_starts: 0,
        }
    }
}

pub const ALL_NAMES: &[&str] = &[
    "mean",
    "median",
    "mad",
    "mad_star",
    "l1_median",
    "ls_origin",
    "ls_origin_bounded",
    "logistic_regularized",
    "constant_zero_logistic",
    "growth_fit",
    "michaelis_menten_fit",
];

impl Estimator {
    pub fn new(kind: EstimatorKind) -> Self {
        Estimator {
            kind,
            epsilon: 1e-3,
        }
    }

    pub fn with_epsilon(kind: EstimatorKind, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidArgument {
                what: format!("regularization weight must be positive, got {epsilon}"),
            });
        }
        Ok(Estimator { kind, epsilon })
    }

    pub fn parse(name: &str) -> Result<Self> {
        let kind = match name {
            "mean" => EstimatorKind::Mean,
            "median" => EstimatorKind::Median,
            "mad" => EstimatorKind::Mad,
            "mad_star" => EstimatorKind::MadStar,
            "l1_median" => EstimatorKind::L1Median,
            "ls_origin" => EstimatorKind::LsOrigin,
            "ls_origin_bounded" => EstimatorKind::LsOriginBounded,
            "logistic_regularized" => EstimatorKind::LogisticRegularized,
            "constant_zero_logistic" => EstimatorKind::ConstantZeroLogistic,
            "growth_fit" => EstimatorKind::GrowthFit,
            "michaelis_menten_fit" => EstimatorKind::MichaelisMentenFit,
            _ => {
                return Err(Error::UnknownName {
                    what: "estimator".into(),
                    name: name.into(),
                })
            }
        };
        Ok(Estimator::new(kind))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            EstimatorKind::Mean => "mean",
            EstimatorKind::Median => "median",
            EstimatorKind::Mad => "mad",
            EstimatorKind::MadStar => "mad_star",
            EstimatorKind::L1Median => "l1_median",
            EstimatorKind::LsOrigin => "ls_origin",
            EstimatorKind::LsOriginBounded => "ls_origin_bounded",
            EstimatorKind::LogisticRegularized => "logistic_regularized",
            EstimatorKind::ConstantZeroLogistic => "constant_zero_logistic",
            EstimatorKind::GrowthFit => "growth_fit",
            EstimatorKind::MichaelisMentenFit => "michaelis_menten_fit",
        }
    }

    /// The group family this estimator claims equivariance under, or None
    /// for the deliberately non-equivariant functionals.
    pub fn declared_family(&self, kind: SampleSpaceKind) -> Option<GroupFamily> {
        match (self.kind, kind) {
            (EstimatorKind::Mean, SampleSpaceKind::Euclidean { dim }) => {
                Some(GroupFamily::Translation { dim })
            }
            (EstimatorKind::Median, SampleSpaceKind::Euclidean { dim: 1 }) => {
                Some(GroupFamily::Translation { dim: 1 })
            }
            (
                EstimatorKind::Mad | EstimatorKind::MadStar,
                SampleSpaceKind::Euclidean { dim: 1 },
            ) => Some(GroupFamily::Affine { dim: 1 }),
            (EstimatorKind::L1Median, SampleSpaceKind::Euclidean { dim }) => {
                Some(GroupFamily::Translation { dim })
            }
            (EstimatorKind::LsOrigin, SampleSpaceKind::RegressionPair { carrier_dim }) => {
                Some(GroupFamily::RegressionCarrier { carrier_dim })
            }
            (EstimatorKind::LsOriginBounded, _) => None,
            (
                EstimatorKind::LogisticRegularized | EstimatorKind::ConstantZeroLogistic,
                SampleSpaceKind::BinaryResponse { covariate_dim },
            ) => Some(GroupFamily::BinaryResponse { covariate_dim }),
            (EstimatorKind::GrowthFit, _) => None,
            (EstimatorKind::MichaelisMentenFit, SampleSpaceKind::PositiveCarrier) => {
                Some(GroupFamily::ScaleX)
            }
            _ => None,
        }
    }

    /// The metric its breakdown and equivariance discrepancies are measured in.
    pub fn metric(&self) -> ParamMetricKind {
        match self.kind {
            EstimatorKind::Mad | EstimatorKind::MadStar => ParamMetricKind::ScaleLog,
            EstimatorKind::MichaelisMentenFit => ParamMetricKind::MichaelisMenten,
            _ => ParamMetricKind::Euclidean,
        }
    }

    /// Closed-form estimators are exact; iterative ones carry solver noise.
    pub fn is_closed_form(&self) -> bool {
        !matches!(
            self.kind,
            EstimatorKind::L1Median
                | EstimatorKind::LogisticRegularized
                | EstimatorKind::GrowthFit
                | EstimatorKind::MichaelisMentenFit
        )
    }

    /// Check the sample kind this estimator is defined on.
    pub fn check_kind(&self, kind: SampleSpaceKind) -> Result<()> {
        let ok = match self.kind {
            EstimatorKind::Mean | EstimatorKind::L1Median => {
                matches!(kind, SampleSpaceKind::Euclidean { .. })
            }
            EstimatorKind::Median | EstimatorKind::Mad | EstimatorKind::MadStar => {
                matches!(kind, SampleSpaceKind::Euclidean { dim: 1 })
            }
            EstimatorKind::LsOrigin => matches!(kind, SampleSpaceKind::RegressionPair { .. }),
            EstimatorKind::LsOriginBounded => {
                matches!(kind, SampleSpaceKind::RegressionPair { carrier_dim: 1 })
            }
            EstimatorKind::LogisticRegularized | EstimatorKind::ConstantZeroLogistic => {
                matches!(kind, SampleSpaceKind::BinaryResponse { .. })
            }
            EstimatorKind::GrowthFit => matches!(kind, SampleSpaceKind::TimePair),
            EstimatorKind::MichaelisMentenFit => {
                matches!(kind, SampleSpaceKind::PositiveCarrier)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: format!("a sample kind supported by {}", self.name()),
                got: kind.label(),
            })
        }
    }

    pub fn evaluate(&self, p: &EmpiricalMeasure) -> Result<Estimate> {
        self.evaluate_from(p, None)
    }

    /// Evaluate with an optional warm start for the iterative fits; closed
    /// forms ignore the start.
    pub fn evaluate_from(
        &self,
        p: &EmpiricalMeasure,
        start: Option<&ParameterPoint>,
    ) -> Result<Estimate> {
        self.check_kind(p.kind())?;
        match self.kind {
            EstimatorKind::Mean => Ok(Estimate::closed(ParameterPoint::Location {
                coords: weighted_mean(p),
            })),
            EstimatorKind::Median => Ok(Estimate::closed(ParameterPoint::Location {
                coords: vec![median_value(p)?],
            })),
            EstimatorKind::Mad => Ok(Estimate::closed(ParameterPoint::Scale {
                value: mad_value(p)?,
            })),
            EstimatorKind::MadStar => Ok(Estimate::closed(ParameterPoint::Scale {
                value: mad_star_value(p)?,
            })),
            EstimatorKind::L1Median => l1_median(p, start),
            EstimatorKind::LsOrigin => ls_origin(p),
            EstimatorKind::LsOriginBounded => ls_origin_bounded(p),
            EstimatorKind::LogisticRegularized => logistic_regularized(p, self.epsilon, start),
            EstimatorKind::ConstantZeroLogistic => {
                let covariate_dim = match p.kind() {
                    SampleSpaceKind::BinaryResponse { covariate_dim } => covariate_dim,
                    _ => unreachable!("kind checked above"),
                };
                Ok(Estimate::closed(ParameterPoint::LogisticTheta {
                    intercept: 0.0,
                    slope: vec![0.0; covariate_dim],
                }))
            }
            EstimatorKind::GrowthFit => growth_fit(p, start),
            EstimatorKind::MichaelisMentenFit => michaelis_menten_fit(p, start),
        }
    }
}

fn weighted_mean(p: &EmpiricalMeasure) -> Vec<f64> {
    let dim = p.kind().point_dim();
    let mut out = vec![0.0; dim];
    for (pt, &w) in p.points().iter().zip(p.weights()) {
        for (o, &v) in out.iter_mut().zip(pt) {
            *o += w * v;
        }
    }
    out
}

fn median_value(p: &EmpiricalMeasure) -> Result<f64> {
    let mut vals = p.scalars()?;
    Ok(lower_weighted_median(&mut vals))
}

fn mad_value(p: &EmpiricalMeasure) -> Result<f64> {
    let med = median_value(p)?;
    let mut dev: Vec<(f64, f64)> = p
        .scalars()?
        .into_iter()
        .map(|(x, w)| ((x - med).abs(), w))
        .collect();
    Ok(lower_weighted_median(&mut dev))
}

/// Smallest half-width lambda such that the closed interval of that width
/// around the median holds at least (1 + m)/2 of the mass, where m is the
/// largest single-point mass inside the interval. Both sides of the
/// inequality only change at the candidate widths |x_i - median|, so a scan
/// over those candidates is exact.
fn mad_star_value(p: &EmpiricalMeasure) -> Result<f64> {
    let med = median_value(p)?;
    let support: Vec<(f64, f64)> = p
        .merged_support()
        .into_iter()
        .map(|(pt, w)| (pt[0], w))
        .collect();
    let mut candidates: Vec<f64> = support.iter().map(|&(x, _)| (x - med).abs()).collect();
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    for lambda in candidates {
        let mut inside = 0.0;
        let mut max_atom: f64 = 0.0;
        for &(x, w) in &support {
            if (x - med).abs() <= lambda {
                inside += w;
                max_atom = max_atom.max(w);
            }
        }
        if inside >= (1.0 + max_atom) / 2.0 - 1e-12 {
            return Ok(lambda);
        }
    }
    unreachable!("the largest candidate always covers all mass");
}

/// Spatial median: minimizer of the weighted sum of distances to the data.
/// Fixed-point (Weiszfeld) iteration with exact handling of iterates that
/// sit on data points; if any data point already satisfies the subgradient
/// optimality condition it is returned exactly, which in particular makes
/// the univariate odd-size case agree with the sample median to the bit.
fn l1_median(p: &EmpiricalMeasure, start: Option<&ParameterPoint>) -> Result<Estimate> {
    let support = p.merged_support();
    let dim = p.kind().point_dim();

    if support.len() == 1 {
        return Ok(Estimate::closed(ParameterPoint::Location {
            coords: support[0].0.clone(),
        }));
    }

    // Exact optimality screen over data points, in sorted order so ties in
    // the optimality condition resolve to the smallest point.
    let mut order: Vec<usize> = (0..support.len()).collect();
    order.sort_by(|&i, &j| {
        support[i]
            .0
            .partial_cmp(&support[j].0)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for &j in &order {
        let (resid, _) = pull_without(&support, j, &support[j].0);
        if norm(&resid) <= support[j].1 * (1.0 + 1e-12) {
            return Ok(Estimate {
                value: ParameterPoint::Location {
                    coords: support[j].0.clone(),
                },
                converged: true,
                iterations: 0,
                residual: 0.0,
                objective: Some(l1_objective(&support, &support[j].0)),
                tied_starts: 0,
            });
        }
    }

    let mut mu: Vec<f64> = match start {
        Some(ParameterPoint::Location { coords }) if coords.len() == dim => coords.clone(),
        _ => weighted_mean(p),
    };
    let mut obj = l1_objective(&support, &mu);
    let mut step = f64::INFINITY;
    let cap = 10_000;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cap {
        iterations += 1;
        let next = weiszfeld_step(&support, &mu);
        step = mu
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let next_obj = l1_objective(&support, &next);
        let decrease = obj - next_obj;
        mu = next;
        obj = next_obj;
        if step < 1e-10 || decrease.abs() < 1e-14 * obj.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    Ok(Estimate {
        value: ParameterPoint::Location { coords: mu },
        converged,
        iterations,
        residual: step,
        objective: Some(obj),
        tied_starts: 0,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Sum of w_i * (x_i - mu)/|x_i - mu| over points distinct from mu, plus the
/// weight of the coinciding point if any. Returns (pull vector, index of the
/// coinciding support point).
fn pull_without(support: &[(Vec<f64>, f64)], skip: usize, at: &[f64]) -> (Vec<f64>, f64) {
    let dim = at.len();
    let mut resid = vec![0.0; dim];
    let mut skipped_weight = 0.0;
    for (j, (x, w)) in support.iter().enumerate() {
        if j == skip {
            skipped_weight = *w;
            continue;
        }
        let d: f64 = x
            .iter()
            .zip(at)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if d == 0.0 {
            continue;
        }
        for (r, (a, b)) in resid.iter_mut().zip(x.iter().zip(at)) {
            *r += w * (a - b) / d;
        }
    }
    (resid, skipped_weight)
}

/// Renormalized objective Σ w (|x - mu| - |x|); the subtraction keeps the
/// value finite for measures without a first moment and is constant in mu.
fn l1_objective(support: &[(Vec<f64>, f64)], mu: &[f64]) -> f64 {
    support
        .iter()
        .map(|(x, w)| {
            let d: f64 = x
                .iter()
                .zip(mu)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let n: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            w * (d - n)
        })
        .sum()
}

fn weiszfeld_step(support: &[(Vec<f64>, f64)], mu: &[f64]) -> Vec<f64> {
    let dim = mu.len();
    // Does mu sit on a data point?
    if let Some(j) = support.iter().position(|(x, _)| x.as_slice() == mu) {
        // Move off the point along the pull of the others, damped so the
        // step respects the kink in the objective.
        let (resid, w_j) = pull_without(support, j, mu);
        let r = norm(&resid);
        if r <= w_j {
            return mu.to_vec(); // optimal; caller's step test terminates
        }
        let tilde = weiszfeld_plain(support, mu, Some(j));
        let frac = (w_j / r).min(1.0);
        return tilde
            .iter()
            .zip(mu)
            .map(|(t, m)| (1.0 - frac) * t + frac * m)
            .collect();
    }
    let _ = dim;
    weiszfeld_plain(support, mu, None)
}

fn weiszfeld_plain(support: &[(Vec<f64>, f64)], mu: &[f64], skip: Option<usize>) -> Vec<f64> {
    let dim = mu.len();
    let mut num = vec![0.0; dim];
    let mut den = 0.0;
    for (j, (x, w)) in support.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        let d: f64 = x
            .iter()
            .zip(mu)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if d == 0.0 {
            continue;
        }
        for (n, &a) in num.iter_mut().zip(x) {
            *n += w * a / d;
        }
        den += w / d;
    }
    if den == 0.0 {
        return mu.to_vec();
    }
    num.iter().map(|n| n / den).collect()
}

/// Unclamped least squares through the origin for any carrier dimension:
/// solves (Σ w x xᵗ) β = Σ w x y.
fn ls_origin(p: &EmpiricalMeasure) -> Result<Estimate> {
    let k = match p.kind() {
        SampleSpaceKind::RegressionPair { carrier_dim } => carrier_dim,
        _ => unreachable!("kind checked by caller"),
    };
    let mut m = DMatrix::zeros(k, k);
    let mut v = DVector::zeros(k);
    for (pt, &w) in p.points().iter().zip(p.weights()) {
        let x = DVector::from_column_slice(&pt[..k]);
        let y = pt[k];
        m += w * &x * x.transpose();
        v += w * y * &x;
    }
    let beta = m.lu().solve(&v).ok_or_else(|| Error::Unidentifiable {
        op: "ls_origin".into(),
        reason: "carrier moment matrix is singular".into(),
    })?;
    Ok(Estimate::closed(ParameterPoint::Slope {
        coeffs: beta.as_slice().to_vec(),
    }))
}

/// The bounded slope functional: zero when every carrier value is identical,
/// otherwise the least-squares slope clamped into [-n, n]. Bounded range
/// means it can never break down — and also that it cannot be equivariant.
fn ls_origin_bounded(p: &EmpiricalMeasure) -> Result<Estimate> {
    let first = p.point(0)[0];
    if p.points().iter().all(|pt| pt[0] == first) {
        return Ok(Estimate::closed(ParameterPoint::Slope {
            coeffs: vec![0.0],
        }));
    }
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (pt, &w) in p.points().iter().zip(p.weights()) {
        sxy += w * pt[0] * pt[1];
        sxx += w * pt[0] * pt[0];
    }
    let n = p.len() as f64;
    Ok(Estimate::closed(ParameterPoint::Slope {
        coeffs: vec![(sxy / sxx).clamp(-n, n)],
    }))
}

/// Squared-error logistic fit with a score penalty: minimizes
/// Σ w [(y - s(η))² + ε η²] with η = θ₀ + xᵗθ̃. The penalty makes the
/// objective coercive in the score, so the minimizer stays finite even for
/// linearly separated labels. Covariates are standardized internally and the
/// result is pulled back through the exact parameter action, which keeps the
/// optimizer well conditioned under extreme contamination.
fn logistic_regularized(
    p: &EmpiricalMeasure,
    epsilon: f64,
    start: Option<&ParameterPoint>,
) -> Result<Estimate> {
    let k = match p.kind() {
        SampleSpaceKind::BinaryResponse { covariate_dim } => covariate_dim,
        _ => unreachable!("kind checked by caller"),
    };
    // Standardize covariates: x' = (x - mean)/sd, i.e. an invertible affine
    // covariate change whose parameter action we can invert exactly.
    let mut mean = vec![0.0; k];
    for (pt, &w) in p.points().iter().zip(p.weights()) {
        for (m, &x) in mean.iter_mut().zip(&pt[1..]) {
            *m += w * x;
        }
    }
    let mut sd = vec![0.0; k];
    for (pt, &w) in p.points().iter().zip(p.weights()) {
        for (s, (&x, m)) in sd.iter_mut().zip(pt[1..].iter().zip(&mean)) {
            *s += w * (x - m) * (x - m);
        }
    }
    for s in sd.iter_mut() {
        *s = s.sqrt();
        if !(*s > 1e-12) {
            *s = 1.0;
        }
    }
    let mat: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { 1.0 / sd[i] } else { 0.0 })
                .collect()
        })
        .collect();
    let shift: Vec<f64> = mean.iter().zip(&sd).map(|(m, s)| -m / s).collect();
    let g = GroupElement::covariate_affine(mat, shift)?;

    let rows: Vec<(f64, Vec<f64>, f64)> = p
        .points()
        .iter()
        .zip(p.weights())
        .map(|(pt, &w)| {
            let x: Vec<f64> = pt[1..]
                .iter()
                .zip(&mean)
                .zip(&sd)
                .map(|((&v, m), s)| (v - m) / s)
                .collect();
            (pt[0], x, w)
        })
        .collect();

    let objective = |theta: &[f64]| -> f64 {
        rows.iter()
            .map(|(y, x, w)| {
                let eta = theta[0] + dot(&theta[1..], x);
                let r = y - sigmoid(eta);
                w * (r * r + epsilon * eta * eta)
            })
            .sum()
    };
    let gradient = |theta: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; theta.len()];
        for (y, x, w) in &rows {
            let eta = theta[0] + dot(&theta[1..], x);
            let s = sigmoid(eta);
            let deta = 2.0 * w * ((s - y) * s * (1.0 - s) + epsilon * eta);
            g[0] += deta;
            for (gj, &xj) in g[1..].iter_mut().zip(x) {
                *gj += deta * xj;
            }
        }
        g
    };

    let x0: Vec<f64> = match start {
        Some(t @ ParameterPoint::LogisticTheta { slope, .. }) if slope.len() == k => {
            // Warm starts are given on the original scale; move them into
            // the standardized coordinates.
            match g.act_parameter(t)? {
                ParameterPoint::LogisticTheta { intercept, slope } => {
                    let mut v = vec![intercept];
                    v.extend(slope);
                    v
                }
                _ => unreachable!(),
            }
        }
        _ => vec![0.0; k + 1],
    };

    let out = fit::minimize(objective, gradient, &x0, &FitOptions::default());
    let standardized = ParameterPoint::LogisticTheta {
        intercept: out.x[0],
        slope: out.x[1..].to_vec(),
    };
    let value = g.inverse()?.act_parameter(&standardized)?;

    // Residual reported on the original scale, where callers check it.
    let residual = {
        let theta = value.flatten();
        let mut gr = vec![0.0; k + 1];
        for (pt, &w) in p.points().iter().zip(p.weights()) {
            let eta = theta[0] + dot(&theta[1..], &pt[1..]);
            let s = sigmoid(eta);
            let deta = 2.0 * w * ((s - pt[0]) * s * (1.0 - s) + epsilon * eta);
            gr[0] += deta;
            for (gj, &xj) in gr[1..].iter_mut().zip(&pt[1..]) {
                *gj += deta * xj;
            }
        }
        norm(&gr)
    };

    Ok(Estimate {
        value,
        converged: out.converged,
        iterations: out.iterations,
        residual,
        objective: Some(out.objective),
        tied_starts: 0,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sigmoid trend fit over time: minimizes Σ w (clip01(y) - s(a + b t))².
///
/// The objective's infimum is not attained when the clipped responses are
/// separated in time — all 0 on one side of some threshold and all 1 on the
/// other (either orientation; points exactly at the threshold are free).
/// Then a step function fits perfectly in the limit |b| → ∞ and the fit is
/// reported as unbounded rather than chasing the runaway ridge numerically.
fn growth_fit(p: &EmpiricalMeasure, start: Option<&ParameterPoint>) -> Result<Estimate> {
    // Points are stored as (y, t).
    let data: Vec<(f64, f64, f64)> = p
        .points()
        .iter()
        .zip(p.weights())
        .map(|(pt, &w)| (clip01(pt[0]), pt[1], w))
        .collect();
    let mut times: Vec<f64> = data.iter().map(|&(_, t, _)| t).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    if times.len() < 2 {
        return Err(Error::Unidentifiable {
            op: "growth_fit".into(),
            reason: "all observations share one time point".into(),
        });
    }

    for &threshold in &times {
        let mut left_all = (true, true); // (all 0, all 1) strictly before
        let mut right_all = (true, true); // strictly after
        for &(c, t, _) in &data {
            if t < threshold {
                left_all.0 &= c == 0.0;
                left_all.1 &= c == 1.0;
            } else if t > threshold {
                right_all.0 &= c == 0.0;
                right_all.1 &= c == 1.0;
            }
        }
        if (left_all.0 && right_all.1) || (left_all.1 && right_all.0) {
            return Err(Error::UnboundedFit {
                op: "growth_fit".into(),
                reason: format!(
                    "responses are separated in time around t = {threshold}; the step limit fits exactly"
                ),
            });
        }
    }

    let objective = |ab: &[f64]| -> f64 {
        data.iter()
            .map(|&(c, t, w)| {
                let r = c - sigmoid(ab[0] + ab[1] * t);
                w * r * r
            })
            .sum()
    };
    let gradient = |ab: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; 2];
        for &(c, t, w) in &data {
            let s = sigmoid(ab[0] + ab[1] * t);
            let d = 2.0 * w * (s - c) * s * (1.0 - s);
            g[0] += d;
            g[1] += d * t;
        }
        g
    };

    let x0 = match start {
        Some(ParameterPoint::GrowthCurve { intercept, slope }) => vec![*intercept, *slope],
        _ => {
            let mut best = (f64::INFINITY, vec![0.0, 0.0]);
            for i in 0..41 {
                for j in 0..41 {
                    let a = -20.0 + i as f64;
                    let b = -20.0 + j as f64;
                    let v = objective(&[a, b]);
                    if v < best.0 {
                        best = (v, vec![a, b]);
                    }
                }
            }
            best.1
        }
    };
    let out = fit::minimize(objective, gradient, &x0, &FitOptions::default());
    Ok(Estimate {
        value: ParameterPoint::GrowthCurve {
            intercept: out.x[0],
            slope: out.x[1],
        },
        converged: out.converged,
        iterations: out.iterations,
        residual: out.grad_norm,
        objective: Some(out.objective),
        tied_starts: 0,
    })
}

/// Saturating-curve fit y ≈ a x / (c x + 1/a), optimized in log-parameters
/// (u, v) = (ln a, ln c) from a 3×3 multistart grid.
fn michaelis_menten_fit(p: &EmpiricalMeasure, start: Option<&ParameterPoint>) -> Result<Estimate> {
    let data: Vec<(f64, f64, f64)> = p
        .points()
        .iter()
        .zip(p.weights())
        .map(|(pt, &w)| (pt[0], pt[1], w))
        .collect();
    let mut xs: Vec<f64> = data.iter().map(|&(x, _, _)| x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    if xs.len() < 2 {
        return Err(Error::Unidentifiable {
            op: "michaelis_menten_fit".into(),
            reason: "need at least two distinct carrier values".into(),
        });
    }

    let model = |uv: &[f64], x: f64| -> f64 {
        // m = e^u x / (e^v x + e^{-u})
        let den = uv[1].exp() * x + (-uv[0]).exp();
        uv[0].exp() * x / den
    };
    let objective = |uv: &[f64]| -> f64 {
        data.iter()
            .map(|&(x, y, w)| {
                let r = y - model(uv, x);
                w * r * r
            })
            .sum()
    };
    let gradient = |uv: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; 2];
        for &(x, y, w) in &data {
            let den = uv[1].exp() * x + (-uv[0]).exp();
            let m = uv[0].exp() * x / den;
            let dmu = m * (1.0 + (-uv[0]).exp() / den);
            let dmv = -m * uv[1].exp() * x / den;
            let d = 2.0 * w * (m - y);
            g[0] += d * dmu;
            g[1] += d * dmv;
        }
        g
    };

    let ln10 = std::f64::consts::LN_10;
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(ParameterPoint::MichaelisMenten { a, c }) = start {
        if *a > 0.0 && *c > 0.0 {
            starts.push(vec![a.ln(), c.ln()]);
        }
    }
    for &u in &[-ln10, 0.0, ln10] {
        for &v in &[-ln10, 0.0, ln10] {
            starts.push(vec![u, v]);
        }
    }

    let mut best: Option<crate::fit::FitOutcome> = None;
    let mut total_iterations = 0;
    let mut tied_starts = 0;
    for s in &starts {
        let out = fit::minimize(&objective, &gradient, s, &FitOptions::default());
        total_iterations += out.iterations;
        match &best {
            Some(b) => {
                if (out.objective - b.objective).abs() <= 1e-9
                    && (out.x[0] - b.x[0]).abs() + (out.x[1] - b.x[1]).abs() > 1e-6
                {
                    tied_starts += 1;
                }
                if out.objective < b.objective - 1e-15 {
                    best = Some(out);
                }
            }
            None => best = Some(out),
        }
    }
    let best = best.expect("at least nine starts");
    if best.x[0].abs() > 30.0 || best.x[1].abs() > 30.0 {
        return Err(Error::BoundaryFit {
            op: "michaelis_menten_fit".into(),
            reason: format!(
                "optimum ran to the edge of the log-parameter box: (ln a, ln c) = ({:.2}, {:.2})",
                best.x[0], best.x[1]
            ),
        });
    }
    Ok(Estimate {
        value: ParameterPoint::MichaelisMenten {
            a: best.x[0].exp(),
            c: best.x[1].exp(),
        },
        converged: best.converged,
        iterations: total_iterations,
        residual: best.grad_norm,
        objective: Some(best.objective),
        tied_starts,
    })
}
