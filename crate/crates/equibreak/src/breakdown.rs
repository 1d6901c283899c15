//! Adversarial contamination search that brackets breakdown points.
//!
//! Two attack models are implemented:
//!
//! * **Replacement** ([`fsbp_search`]): replace k of the n sample points
//!   with adversarial ones and watch the estimate along a geometric ladder
//!   of contamination magnitudes. The smallest k whose best attack trace
//!   diverges gives the lower bracket `k/n` on the replacement breakdown
//!   fraction; the degeneracy bound (when the declared group family has
//!   breaking elements) gives the upper bracket. Their consistency is a
//!   hard assertion — a violation panics, because it means either the
//!   estimator or the bound machinery is wrong.
//!
//! * **Mixture** ([`contamination_breakdown`]): blend the sample with an
//!   adversarial point mass of weight ε over a grid of ε values. A
//!   divergent trace at some ε proves the gross-error breakdown point is
//!   ≤ ε, so the smallest diverging grid value is reported explicitly as an
//!   upper bound — the search proves nothing below it.
//!
//! Solver failure at a rung is never treated as divergence: statistical
//! breakdown (the estimate genuinely running away) is kept distinct from
//! numerical fragility, which is merely surfaced in the trace.

use crate::degeneracy::{self, BoundOutcome, DeltaWitness};
use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::group::{ParamMetricKind, ParameterPoint};
use crate::measure::{mix, EmpiricalMeasure, Point, ProbMetricKind, SampleSpaceKind};
use rayon::prelude::*;
use serde::Serialize;

/// Absolute estimate-distance beyond which a still-increasing trace counts
/// as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Fraction of one decade's worth of log growth that a log-scale trace must
/// sustain per ladder decade to count as divergent.
pub const LOG_RATE_FACTOR: f64 = 0.9;
/// Samples strictly smaller than this get exhaustive index subsets.
pub const EXHAUSTIVE_BELOW: usize = 13;
/// Samples strictly smaller than this get exhaustive subsets for k ≤ 2.
pub const EXHAUSTIVE_PAIRS_BELOW: usize = 31;

/// Where the replacement points go. Magnitudes come from the plan's ladder;
/// `slot` staggering keeps simultaneous replacements distinct.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Placement {
    /// Send points to +λ (responses to their upper extreme for bounded
    /// kinds).
    ExplodePositive,
    /// Send points to −λ (responses to their lower extreme).
    ExplodeNegative,
    /// Send points to λ·v for a fixed unit direction v.
    ExplodeAlongDirection { direction: Vec<f64> },
    /// Implosion: cluster points within δ = 1/λ of an anchor (staggered so
    /// simultaneous replacements stay distinct; multiplicative in the
    /// carrier for positive-carrier data).
    ClusterAtPoint { anchor: Vec<f64> },
    /// Stack points exactly onto the degenerate set found by the
    /// degeneracy scan (a point or affine subspace), raising its mass.
    OnWitnessHyperplane { witness: DeltaWitness },
    /// Flip binary responses of the replaced points, keeping covariates.
    LabelFlipAll,
}

impl Placement {
    pub fn label(&self) -> String {
        match self {
            Placement::ExplodePositive => "explode-positive".into(),
            Placement::ExplodeNegative => "explode-negative".into(),
            Placement::ExplodeAlongDirection { direction } => {
                format!("explode-direction{direction:?}")
            }
            Placement::ClusterAtPoint { anchor } => format!("cluster-at{anchor:?}"),
            Placement::OnWitnessHyperplane { .. } => "on-witness-set".into(),
            Placement::LabelFlipAll => "label-flip-all".into(),
        }
    }
}

/// Full attack schedule: magnitudes, placements, and how replacement
/// indices are chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContaminationPlan {
    /// Strictly increasing contamination magnitudes, by default
    /// 10¹ … 10¹².
    pub ladder: Vec<f64>,
    pub placements: Vec<Placement>,
    /// Below this sample size every index subset is tried (k ≤ 2 subsets
    /// are exhaustive below [`EXHAUSTIVE_PAIRS_BELOW`]); otherwise only the
    /// k points farthest from and nearest to the reference estimate.
    pub exhaustive_below: usize,
}

impl ContaminationPlan {
    pub fn ladder_to_exp(max_exp: u32) -> Vec<f64> {
        (1..=max_exp).map(|e| 10f64.powi(e as i32)).collect()
    }

    /// The default schedule for a sample: explosion in both signs, implosion
    /// clusters anchored at the coordinatewise median (first — so implosion
    /// witnesses are found there) and at each distinct support point for
    /// small samples, plus kind-specific attacks (degenerate-set stacking
    /// for low-dimensional euclidean data, label flips for binary
    /// responses).
    pub fn default_for(sample: &EmpiricalMeasure) -> Result<Self> {
        Self::with_ladder(sample, Self::ladder_to_exp(12))
    }

    pub fn with_ladder(sample: &EmpiricalMeasure, ladder: Vec<f64>) -> Result<Self> {
        let kind = sample.kind();
        let mut placements = vec![Placement::ExplodePositive, Placement::ExplodeNegative];
        match kind {
            SampleSpaceKind::Euclidean { dim } => {
                if dim >= 2 {
                    let mut axis = vec![0.0; dim];
                    axis[0] = 1.0;
                    placements.push(Placement::ExplodeAlongDirection { direction: axis });
                }
                push_cluster_anchors(&mut placements, sample);
                if dim <= 3 {
                    let witness = degeneracy::delta_affine(sample, dim)?.witness;
                    placements.push(Placement::OnWitnessHyperplane { witness });
                }
            }
            SampleSpaceKind::RegressionPair { .. }
            | SampleSpaceKind::TimePair
            | SampleSpaceKind::PositiveCarrier => {
                push_cluster_anchors(&mut placements, sample);
            }
            SampleSpaceKind::BinaryResponse { .. } => {
                placements.push(Placement::LabelFlipAll);
            }
        }
        let plan = ContaminationPlan {
            ladder,
            placements,
            exhaustive_below: EXHAUSTIVE_BELOW,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ladder.len() < 2
            || self
                .ladder
                .windows(2)
                .any(|w| !(w[0] < w[1]) || !w[0].is_finite())
            || self.ladder[0] <= 0.0
        {
            return Err(Error::LadderShape);
        }
        if self.placements.is_empty() {
            return Err(Error::InvalidArgument {
                what: "contamination plan needs at least one placement".into(),
            });
        }
        Ok(())
    }
}

fn push_cluster_anchors(placements: &mut Vec<Placement>, sample: &EmpiricalMeasure) {
    let mut anchors: Vec<Point> = vec![sample.coordinatewise_median()];
    if sample.len() < EXHAUSTIVE_BELOW {
        for (pt, _) in sample.merged_support() {
            if !anchors.iter().any(|a| a == &pt) {
                anchors.push(pt);
            }
        }
    }
    for anchor in anchors {
        placements.push(Placement::ClusterAtPoint { anchor });
    }
}

/// Offsets +1, −1, +2, −2, … that keep simultaneously placed points
/// distinct.
fn stagger(slot: usize) -> f64 {
    let magnitude = (slot / 2 + 1) as f64;
    if slot % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// The replacement point for one slot of an attack.
fn materialize(
    placement: &Placement,
    sample: &EmpiricalMeasure,
    original_index: usize,
    slot: usize,
    lambda: f64,
) -> Result<Point> {
    let kind = sample.kind();
    let scale = lambda * (1.0 + slot as f64);
    let delta = 1.0 / lambda;
    let unsupported = || {
        Err(Error::IncompatibleAction {
            group: placement.label(),
            target: kind.label(),
        })
    };
    match kind {
        SampleSpaceKind::Euclidean { dim } => match placement {
            Placement::ExplodePositive => Ok(vec![scale / (dim as f64).sqrt(); dim]),
            Placement::ExplodeNegative => Ok(vec![-scale / (dim as f64).sqrt(); dim]),
            Placement::ExplodeAlongDirection { direction } => {
                let norm: f64 = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
                if direction.len() != dim || norm == 0.0 {
                    return Err(Error::InvalidArgument {
                        what:
                            "explosion direction must be a nonzero vector of the sample dimension"
                                .into(),
                    });
                }
                Ok(direction.iter().map(|v| scale * v / norm).collect())
            }
            Placement::ClusterAtPoint { anchor } => {
                let mut p = anchor.clone();
                p[0] += delta * stagger(slot);
                Ok(p)
            }
            Placement::OnWitnessHyperplane { witness } => match witness {
                DeltaWitness::Point { point } => Ok(point.clone()),
                DeltaWitness::Subspace { normals, offsets } => {
                    // Least-norm point of the subspace, then staggered
                    // steps along a spanning direction.
                    let mut base = vec![0.0; dim];
                    for (n, c) in normals.iter().zip(offsets) {
                        for (b, nv) in base.iter_mut().zip(n) {
                            *b += c * nv;
                        }
                    }
                    let span = complement_direction(normals, dim);
                    let step = sample.coordinate_spread().max(1.0) * (1.0 + slot as f64);
                    Ok(base.iter().zip(&span).map(|(b, s)| b + step * s).collect())
                }
                _ => unsupported(),
            },
            Placement::LabelFlipAll => unsupported(),
        },
        SampleSpaceKind::RegressionPair { carrier_dim } => {
            let orig = sample.point(original_index);
            match placement {
                Placement::ExplodePositive => {
                    let mut p = orig.to_vec();
                    p[carrier_dim] = scale;
                    Ok(p)
                }
                Placement::ExplodeNegative => {
                    let mut p = orig.to_vec();
                    p[carrier_dim] = -scale;
                    Ok(p)
                }
                Placement::ClusterAtPoint { anchor } => {
                    let off = delta * stagger(slot) / ((carrier_dim + 1) as f64).sqrt();
                    Ok(anchor.iter().map(|a| a + off).collect())
                }
                _ => unsupported(),
            }
        }
        SampleSpaceKind::BinaryResponse { covariate_dim } => match placement {
            Placement::ExplodePositive => {
                let x = scale / (covariate_dim as f64).sqrt();
                let mut p = vec![x; covariate_dim + 1];
                p[0] = 1.0;
                Ok(p)
            }
            Placement::ExplodeNegative => {
                let x = -scale / (covariate_dim as f64).sqrt();
                let mut p = vec![x; covariate_dim + 1];
                p[0] = 0.0;
                Ok(p)
            }
            Placement::LabelFlipAll => {
                let orig = sample.point(original_index);
                let mut p = orig.to_vec();
                p[0] = 1.0 - orig[0];
                Ok(p)
            }
            _ => unsupported(),
        },
        SampleSpaceKind::TimePair => match placement {
            // Points are stored as (response, time).
            Placement::ExplodePositive => Ok(vec![1.0, scale]),
            Placement::ExplodeNegative => Ok(vec![0.0, -scale]),
            Placement::ClusterAtPoint { anchor } => {
                Ok(vec![anchor[0], anchor[1] + delta * stagger(slot)])
            }
            _ => unsupported(),
        },
        SampleSpaceKind::PositiveCarrier => match placement {
            Placement::ExplodePositive => Ok(vec![scale, scale]),
            Placement::ExplodeNegative => Ok(vec![1.0 / scale, -scale]),
            Placement::ClusterAtPoint { anchor } => {
                let off = delta * stagger(slot);
                Ok(vec![anchor[0] * (1.0 + off), anchor[1] + off])
            }
            _ => unsupported(),
        },
    }
}

/// One direction spanning the subspace (orthogonal to every normal).
fn complement_direction(normals: &[Vec<f64>], dim: usize) -> Vec<f64> {
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        for n in normals {
            let c: f64 = e.iter().zip(n).map(|(a, b)| a * b).sum();
            for (ev, nv) in e.iter_mut().zip(n) {
                *ev -= c * nv;
            }
        }
        let len = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len > 1e-9 {
            return e.iter().map(|v| v / len).collect();
        }
    }
    vec![0.0; dim]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    /// Converged estimate; `distance` is valid evidence.
    Ok,
    /// The fit's infimum is not attained — counted as an infinite distance.
    Unbounded,
    /// Non-convergence or an evaluation error; never divergence evidence.
    SolverFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub lambda: f64,
    /// Distance from the uncontaminated estimate; None when unbounded or
    /// failed.
    pub distance: Option<f64>,
    pub status: TraceStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Divergence test over an ordered trace of (magnitude, distance) pairs.
/// Distances may be +∞. True when any distance is infinite, when the
/// distance exceeds [`DIVERGENCE_THRESHOLD`] while strictly increasing over
/// the last three entries, or — for log-scale metrics, where genuine
/// breakdown shows as steady linear growth instead of blowup — when the
/// distance grows by at least [`LOG_RATE_FACTOR`]·ln(10) per magnitude
/// decade across the last four entries.
pub fn diverges(trace: &[(f64, f64)], log_scale: bool) -> Result<bool> {
    if trace.len() < 2 {
        return Err(Error::TraceTooShort { len: trace.len() });
    }
    if trace.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::LadderShape);
    }
    if trace.iter().any(|&(_, d)| d == f64::INFINITY) {
        return Ok(true);
    }
    let n = trace.len();
    if n >= 3 {
        let a = trace[n - 3].1;
        let b = trace[n - 2].1;
        let c = trace[n - 1].1;
        if c > DIVERGENCE_THRESHOLD && a < b && b < c {
            return Ok(true);
        }
    }
    if log_scale && n >= 4 {
        let min_rate = LOG_RATE_FACTOR * std::f64::consts::LN_10;
        let steady = trace[n - 4..].windows(2).all(|w| {
            let decades = w[1].0.log10() - w[0].0.log10();
            decades > 0.0 && (w[1].1 - w[0].1) / decades >= min_rate
        });
        if steady {
            return Ok(true);
        }
    }
    Ok(false)
}

/// How the replacement indices for one attack were chosen.
fn index_subsets(
    sample: &EmpiricalMeasure,
    k: usize,
    plan: &ContaminationPlan,
    reference: &[f64],
) -> Vec<Vec<usize>> {
    let n = sample.len();
    if n < plan.exhaustive_below || (k <= 2 && n < EXHAUSTIVE_PAIRS_BELOW) {
        return combinations(n, k);
    }
    let mut by_distance: Vec<usize> = (0..n).collect();
    let dist = |i: usize| -> f64 {
        sample
            .point(i)
            .iter()
            .zip(reference)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
    };
    by_distance.sort_by(|&i, &j| {
        dist(j)
            .partial_cmp(&dist(i))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut farthest: Vec<usize> = by_distance[..k].to_vec();
    let mut nearest: Vec<usize> = by_distance[n - k..].to_vec();
    farthest.sort_unstable();
    nearest.sort_unstable();
    if farthest == nearest {
        vec![farthest]
    } else {
        vec![farthest, nearest]
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n || k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Result of running one placement × index-subset attack along the ladder.
#[derive(Debug, Clone)]
struct AttackOutcome {
    entries: Vec<TraceEntry>,
    diverged: bool,
    solver_failures: usize,
    max_parameter_norm: f64,
    /// Last evidence rung: (lambda, distance, replacement points, warm
    /// start used there).
    last_evidence: Option<(f64, f64, Vec<Point>, Option<ParameterPoint>)>,
}

fn run_attack(
    est: &Estimator,
    sample: &EmpiricalMeasure,
    baseline: &ParameterPoint,
    metric: ParamMetricKind,
    placement: &Placement,
    subset: &[usize],
    ladder: &[f64],
) -> AttackOutcome {
    let mut entries = Vec::with_capacity(ladder.len());
    let mut evidence: Vec<(f64, f64)> = Vec::new();
    let mut warm = baseline.clone();
    let mut solver_failures = 0usize;
    let mut max_parameter_norm: f64 = 0.0;
    let mut last_evidence = None;

    for &lambda in ladder {
        let points: Result<Vec<Point>> = subset
            .iter()
            .enumerate()
            .map(|(slot, &i)| materialize(placement, sample, i, slot, lambda))
            .collect();
        let warm_at_rung = warm.clone();
        let outcome = points.and_then(|pts| {
            let contaminated = sample.replace(subset, &pts)?;
            est.evaluate_from(&contaminated, Some(&warm_at_rung))
                .map(|e| (pts, e))
        });
        match outcome {
            Ok((pts, e)) => {
                let norm = e.value.flatten().iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm.is_finite() {
                    max_parameter_norm = max_parameter_norm.max(norm);
                }
                let d = metric.distance(baseline, &e.value).unwrap_or(f64::NAN);
                if e.converged && d.is_finite() {
                    entries.push(TraceEntry {
                        lambda,
                        distance: Some(d),
                        status: TraceStatus::Ok,
                        note: None,
                    });
                    evidence.push((lambda, d));
                    last_evidence = Some((lambda, d, pts, Some(warm_at_rung)));
                } else if e.converged && d == f64::INFINITY {
                    entries.push(TraceEntry {
                        lambda,
                        distance: None,
                        status: TraceStatus::Unbounded,
                        note: Some("estimate infinitely far from baseline".into()),
                    });
                    evidence.push((lambda, f64::INFINITY));
                    last_evidence = Some((lambda, f64::INFINITY, pts, Some(warm_at_rung)));
                } else {
                    solver_failures += 1;
                    entries.push(TraceEntry {
                        lambda,
                        distance: if d.is_finite() { Some(d) } else { None },
                        status: TraceStatus::SolverFailed,
                        note: Some(format!(
                            "no convergence after {} iterations (residual {:.3e})",
                            e.iterations, e.residual
                        )),
                    });
                }
                warm = e.value;
            }
            Err(Error::UnboundedFit { reason, .. }) => {
                let pts: Vec<Point> = subset
                    .iter()
                    .enumerate()
                    .map(|(slot, &i)| materialize(placement, sample, i, slot, lambda))
                    .collect::<Result<_>>()
                    .unwrap_or_default();
                entries.push(TraceEntry {
                    lambda,
                    distance: None,
                    status: TraceStatus::Unbounded,
                    note: Some(reason),
                });
                evidence.push((lambda, f64::INFINITY));
                last_evidence = Some((lambda, f64::INFINITY, pts, Some(warm_at_rung)));
            }
            Err(e) => {
                solver_failures += 1;
                entries.push(TraceEntry {
                    lambda,
                    distance: None,
                    status: TraceStatus::SolverFailed,
                    note: Some(e.to_string()),
                });
            }
        }
        // An infinite distance with at least one earlier evidence rung
        // already certifies divergence; later rungs add nothing.
        if evidence.len() >= 2 && evidence.last().map(|&(_, d)| d) == Some(f64::INFINITY) {
            break;
        }
    }

    let diverged =
        evidence.len() >= 2 && diverges(&evidence, metric.is_log_scale()).unwrap_or(false);
    AttackOutcome {
        entries,
        diverged,
        solver_failures,
        max_parameter_norm,
        last_evidence,
    }
}

/// Closed-form replacement breakdown fractions, where one is known.
/// The location cases count how many replacements move the estimate
/// arbitrarily; the scale cases follow from the degenerate-mass analysis
/// (for the plain scale functional the formula is a population-style value
/// that the k/n replacement grid may sit above); the regression, response,
/// and trend cases assume general-position (respectively generic) samples.
pub fn closed_form_fsbp(est: &Estimator, sample: &EmpiricalMeasure) -> Result<Option<f64>> {
    use crate::estimators::EstimatorKind::*;
    let n = sample.len() as f64;
    let value = match est.kind {
        Mean => Some(1.0 / n),
        Median => Some(((n + 1.0) / 2.0).floor() / n),
        Mad => {
            let delta = degeneracy::delta_affine(sample, 1)?.value;
            Some((0.5 - delta).max(0.0))
        }
        MadStar => {
            let delta = degeneracy::delta_affine(sample, 1)?.value;
            match degeneracy::theorem_bounds(sample.len(), delta, true)? {
                BoundOutcome::Bounds { fsbp_bound, .. } => Some(fsbp_bound),
                BoundOutcome::NoBreakingElements => None,
            }
        }
        LogisticRegularized => match sample.kind() {
            SampleSpaceKind::BinaryResponse { covariate_dim } => {
                Some(1.0 - covariate_dim as f64 / n)
            }
            _ => None,
        },
        GrowthFit => Some(1.0 - 1.0 / n),
        LsOriginBounded => Some(1.0),
        _ => None,
    };
    Ok(value)
}

/// Upper bracket reported alongside the search result.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum UpperBoundReport {
    /// Degeneracy bound for the declared family.
    TheoremBound {
        value: f64,
        numerator: u64,
        n: usize,
        delta: f64,
    },
    /// Declared family has no breaking elements for this metric.
    NoBreakingElements,
    /// The estimator declares no group family.
    NoDeclaredFamily,
}

impl UpperBoundReport {
    pub fn describe(&self) -> String {
        match self {
            UpperBoundReport::TheoremBound { numerator, n, .. } => format!("{numerator}/{n}"),
            UpperBoundReport::NoBreakingElements => "n/a (group has no breaking elements)".into(),
            UpperBoundReport::NoDeclaredFamily => "n/a (no declared group)".into(),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            UpperBoundReport::TheoremBound { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// The attack that certified k_break, stored so it can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakWitness {
    pub k: usize,
    pub placement: Placement,
    pub indices: Vec<usize>,
    pub final_lambda: f64,
    /// None means the final rung was unbounded.
    pub final_distance: Option<f64>,
    pub final_points: Vec<Point>,
    pub final_sample: Vec<Point>,
    /// Warm start in effect at the final rung; replaying with it reproduces
    /// the recorded distance deterministically.
    pub warm_start: Option<ParameterPoint>,
    pub trace: Vec<TraceEntry>,
    /// Whether re-evaluating the final sample reproduced the recorded
    /// distance to 1e-6 relative (always true for reports produced by the
    /// search).
    pub replayed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownReport {
    pub estimator: String,
    pub metric: String,
    pub family: Option<String>,
    pub n: usize,
    pub k_max: usize,
    /// Smallest k at which an attack diverged; None = "none ≤ k_max".
    pub k_break: Option<usize>,
    pub fsbp_lower: Option<f64>,
    pub upper: UpperBoundReport,
    pub closed_form: Option<f64>,
    pub baseline: ParameterPoint,
    pub witness: Option<BreakWitness>,
    pub solver_failures: usize,
    /// Largest finite parameter norm seen across every converged
    /// evaluation of the whole search.
    pub max_parameter_norm: f64,
    /// Whether k_break + 1 also diverged (monotonicity spot check); None
    /// when k_break is absent or k_break + 1 exceeds n.
    pub next_k_also_breaks: Option<bool>,
}

fn reference_point(baseline: &ParameterPoint, sample: &EmpiricalMeasure) -> Vec<f64> {
    match baseline {
        ParameterPoint::Location { coords } if coords.len() == sample.kind().point_dim() => {
            coords.clone()
        }
        _ => sample.coordinatewise_median(),
    }
}

/// Scan k = 1..k_max over every placement × index subset. Returns the first
/// diverging attack in deterministic (placement, subset) order per k.
fn scan_k(
    est: &Estimator,
    sample: &EmpiricalMeasure,
    baseline: &ParameterPoint,
    metric: ParamMetricKind,
    plan: &ContaminationPlan,
    reference: &[f64],
    k: usize,
) -> (Option<(usize, Vec<usize>, AttackOutcome)>, usize, f64) {
    let subsets = index_subsets(sample, k, plan, reference);
    let tasks: Vec<(usize, &Vec<usize>)> = plan
        .placements
        .iter()
        .enumerate()
        .flat_map(|(pi, _)| subsets.iter().map(move |s| (pi, s)))
        .collect();
    let outcomes: Vec<AttackOutcome> = tasks
        .par_iter()
        .map(|(pi, subset)| {
            run_attack(
                est,
                sample,
                baseline,
                metric,
                &plan.placements[*pi],
                subset,
                &plan.ladder,
            )
        })
        .collect();
    let failures: usize = outcomes.iter().map(|o| o.solver_failures).sum();
    let max_norm = outcomes
        .iter()
        .map(|o| o.max_parameter_norm)
        .fold(0.0, f64::max);
    let hit = tasks
        .into_iter()
        .zip(outcomes)
        .find(|(_, o)| o.diverged)
        .map(|((pi, subset), o)| (pi, subset.clone(), o));
    (hit, failures, max_norm)
}

/// Bracket the replacement breakdown fraction of `est` on `sample`.
pub fn fsbp_search(
    est: &Estimator,
    sample: &EmpiricalMeasure,
    plan: &ContaminationPlan,
    k_max: usize,
) -> Result<BreakdownReport> {
    est.check_kind(sample.kind())?;
    plan.validate()?;
    let n = sample.len();
    if k_max == 0 || k_max > n {
        return Err(Error::InvalidArgument {
            what: format!("k_max must lie in 1..={n}, got {k_max}"),
        });
    }
    let baseline = est.evaluate(sample)?;
    let metric = est.metric();
    let family = est.declared_family(sample.kind());

    let upper = match &family {
        None => UpperBoundReport::NoDeclaredFamily,
        Some(f) => {
            let (delta, outcome) = degeneracy::bound_for(sample, f, metric)?;
            match outcome {
                BoundOutcome::Bounds {
                    fsbp_bound,
                    fsbp_numerator,
                    n,
                    ..
                } => UpperBoundReport::TheoremBound {
                    value: fsbp_bound,
                    numerator: fsbp_numerator,
                    n,
                    delta: delta.value,
                },
                BoundOutcome::NoBreakingElements => UpperBoundReport::NoBreakingElements,
            }
        }
    };
    let closed_form = closed_form_fsbp(est, sample)?;
    let reference = reference_point(&baseline.value, sample);

    let mut k_break = None;
    let mut witness = None;
    let mut solver_failures = 0usize;
    let mut max_parameter_norm: f64 = 0.0;
    for k in 1..=k_max {
        let (hit, failures, max_norm) =
            scan_k(est, sample, &baseline.value, metric, plan, &reference, k);
        solver_failures += failures;
        max_parameter_norm = max_parameter_norm.max(max_norm);
        if let Some((pi, subset, outcome)) = hit {
            let (final_lambda, final_d, final_points, warm_start) = outcome
                .last_evidence
                .clone()
                .expect("a diverging attack has evidence");
            let final_sample = sample.replace(&subset, &final_points)?;
            let replayed = replay_final_rung(
                est,
                &final_sample,
                &baseline.value,
                metric,
                warm_start.as_ref(),
                final_d,
            );
            assert!(
                replayed,
                "witness replay failed to reproduce the recorded distance for {} \
                 (placement {}, indices {:?})",
                est.name(),
                plan.placements[pi].label(),
                subset
            );
            k_break = Some(k);
            witness = Some(BreakWitness {
                k,
                placement: plan.placements[pi].clone(),
                indices: subset,
                final_lambda,
                final_distance: final_d.is_finite().then_some(final_d),
                final_points,
                final_sample: final_sample.points().to_vec(),
                warm_start,
                trace: outcome.entries,
                replayed,
            });
            break;
        }
    }

    let fsbp_lower = k_break.map(|k| k as f64 / n as f64);
    if let (Some(lower), Some(bound)) = (fsbp_lower, upper.value()) {
        assert!(
            lower <= bound + 1e-12,
            "breakdown search found divergence at fraction {lower} for {} but the \
             degeneracy bound is {bound}; one of the two is computed wrongly",
            est.name()
        );
    }

    let next_k_also_breaks = match k_break {
        Some(k) if k + 1 <= n => {
            let (hit, failures, max_norm) = scan_k(
                est,
                sample,
                &baseline.value,
                metric,
                plan,
                &reference,
                k + 1,
            );
            solver_failures += failures;
            max_parameter_norm = max_parameter_norm.max(max_norm);
            Some(hit.is_some())
        }
        _ => None,
    };

    Ok(BreakdownReport {
        estimator: est.name().into(),
        metric: metric.label().into(),
        family: family.map(|f| f.label()),
        n,
        k_max,
        k_break,
        fsbp_lower,
        upper,
        closed_form,
        baseline: baseline.value,
        witness,
        solver_failures,
        max_parameter_norm,
        next_k_also_breaks,
    })
}

fn replay_final_rung(
    est: &Estimator,
    final_sample: &EmpiricalMeasure,
    baseline: &ParameterPoint,
    metric: ParamMetricKind,
    warm: Option<&ParameterPoint>,
    recorded: f64,
) -> bool {
    match est.evaluate_from(final_sample, warm) {
        Ok(e) => {
            let d = metric.distance(baseline, &e.value).unwrap_or(f64::NAN);
            if recorded == f64::INFINITY {
                d == f64::INFINITY
            } else {
                (d - recorded).abs() <= 1e-6 * recorded.abs().max(1.0)
            }
        }
        Err(Error::UnboundedFit { .. }) => recorded == f64::INFINITY,
        Err(_) => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContaminationReport {
    pub estimator: String,
    pub prob_metric: String,
    pub grid: Vec<f64>,
    /// Smallest grid ε with a diverging attack. A successful attack at ε
    /// proves the gross-error breakdown point is ≤ ε — an upper bound; the
    /// search proves nothing below it.
    pub first_diverging_epsilon: Option<f64>,
    pub placement: Option<Placement>,
    pub trace: Vec<TraceEntry>,
    pub note: String,
}

pub fn default_epsilon_grid() -> Vec<f64> {
    (1..=12).map(|i| i as f64 * 0.05).collect()
}

/// Gross-error attack: mix the sample with a placement point mass of weight
/// ε over an increasing ε grid; report the smallest diverging grid value.
/// Such mixtures stay within ε of the sample in total-variation distance
/// (and hence in every metric it dominates), so a divergent trace at ε is a
/// genuine contamination-breakdown certificate.
pub fn contamination_breakdown(
    est: &Estimator,
    p: &EmpiricalMeasure,
    d: ProbMetricKind,
    plan: &ContaminationPlan,
    epsilon_grid: &[f64],
) -> Result<ContaminationReport> {
    est.check_kind(p.kind())?;
    plan.validate()?;
    if epsilon_grid.is_empty() {
        return Err(Error::InvalidArgument {
            what: "epsilon grid must be nonempty".into(),
        });
    }
    if epsilon_grid.windows(2).any(|w| !(w[0] < w[1]))
        || epsilon_grid.iter().any(|&e| !(0.0 < e && e < 1.0))
    {
        return Err(Error::InvalidArgument {
            what: "epsilon grid must be strictly increasing within (0, 1)".into(),
        });
    }
    let baseline = est.evaluate(p)?;
    let metric = est.metric();

    for &eps in epsilon_grid {
        for placement in &plan.placements {
            if matches!(placement, Placement::LabelFlipAll) {
                // Flips replace existing points; they are not a point mass.
                continue;
            }
            let mut entries = Vec::new();
            let mut evidence = Vec::new();
            let mut warm = baseline.value.clone();
            for &lambda in &plan.ladder {
                let outcome = materialize(placement, p, 0, 0, lambda).and_then(|r| {
                    let atom = EmpiricalMeasure::dirac(r, p.kind())?;
                    let q = mix(p, &atom, 1.0 - eps)?;
                    est.evaluate_from(&q, Some(&warm))
                });
                match outcome {
                    Ok(e) => {
                        let dist = metric
                            .distance(&baseline.value, &e.value)
                            .unwrap_or(f64::NAN);
                        if e.converged && dist.is_finite() {
                            entries.push(TraceEntry {
                                lambda,
                                distance: Some(dist),
                                status: TraceStatus::Ok,
                                note: None,
                            });
                            evidence.push((lambda, dist));
                        } else if e.converged && dist == f64::INFINITY {
                            entries.push(TraceEntry {
                                lambda,
                                distance: None,
                                status: TraceStatus::Unbounded,
                                note: None,
                            });
                            evidence.push((lambda, f64::INFINITY));
                        } else {
                            entries.push(TraceEntry {
                                lambda,
                                distance: None,
                                status: TraceStatus::SolverFailed,
                                note: Some(format!(
                                    "no convergence after {} iterations",
                                    e.iterations
                                )),
                            });
                        }
                        warm = e.value;
                    }
                    Err(Error::UnboundedFit { reason, .. }) => {
                        entries.push(TraceEntry {
                            lambda,
                            distance: None,
                            status: TraceStatus::Unbounded,
                            note: Some(reason),
                        });
                        evidence.push((lambda, f64::INFINITY));
                    }
                    Err(e) => {
                        entries.push(TraceEntry {
                            lambda,
                            distance: None,
                            status: TraceStatus::SolverFailed,
                            note: Some(e.to_string()),
                        });
                    }
                }
                if evidence.len() >= 2 && evidence.last().map(|&(_, d)| d) == Some(f64::INFINITY) {
                    break;
                }
            }
            if evidence.len() >= 2 && diverges(&evidence, metric.is_log_scale())? {
                return Ok(ContaminationReport {
                    estimator: est.name().into(),
                    prob_metric: d.label(),
                    grid: epsilon_grid.to_vec(),
                    first_diverging_epsilon: Some(eps),
                    placement: Some(placement.clone()),
                    trace: entries,
                    note: format!(
                        "divergence at mixture weight {eps}: the contamination breakdown \
                         point is at most {eps} (upper bound; smaller weights were not \
                         broken by this search)"
                    ),
                });
            }
        }
    }
    Ok(ContaminationReport {
        estimator: est.name().into(),
        prob_metric: d.label(),
        grid: epsilon_grid.to_vec(),
        first_diverging_epsilon: None,
        placement: None,
        trace: Vec::new(),
        note: "no attack on the grid diverged; this certifies nothing beyond the grid".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::EstimatorKind;

    fn uni(values: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::univariate(values).unwrap()
    }

    fn est(kind: EstimatorKind) -> Estimator {
        Estimator::new(kind)
    }

    #[test]
    fn divergence_detector_examples() {
        assert!(diverges(&[(10.0, 1.0), (100.0, f64::INFINITY)], false).unwrap());
        let constant: Vec<(f64, f64)> = (1..=12).map(|e| (10f64.powi(e), 3.2)).collect();
        assert!(!diverges(&constant, false).unwrap());
        // Mean under single-point explosion moves like lambda / n.
        let mean_trace: Vec<(f64, f64)> = (1..=12)
            .map(|e| (10f64.powi(e), 10f64.powi(e) / 6.0))
            .collect();
        assert!(diverges(&mean_trace, false).unwrap());
        assert!(matches!(
            diverges(&[(10.0, 1.0)], false),
            Err(Error::TraceTooShort { .. })
        ));
        // Log-scale: steady gain of ln(10) per decade is divergence...
        let ramp: Vec<(f64, f64)> = (1..=6)
            .map(|e| (10f64.powi(e), e as f64 * std::f64::consts::LN_10))
            .collect();
        assert!(diverges(&ramp, true).unwrap());
        assert!(!diverges(&ramp, false).unwrap());
        // ...but slower growth is not.
        let slow: Vec<(f64, f64)> = (1..=6).map(|e| (10f64.powi(e), e as f64 * 0.5)).collect();
        assert!(!diverges(&slow, true).unwrap());
        // Out-of-order ladders are rejected.
        assert!(diverges(&[(100.0, 1.0), (10.0, 2.0)], false).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn median_six_point_breaks_at_half() {
        let p = uni(&[1.5, 1.8, 1.3, 1.5, 1.8, 1.3]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::Median), &p, &plan, 4).unwrap();
        assert_eq!(report.k_break, Some(3));
        assert_eq!(report.fsbp_lower, Some(0.5));
        assert_eq!(report.upper.value(), Some(0.5));
        assert_eq!(report.closed_form, Some(0.5));
        assert_eq!(report.next_k_also_breaks, Some(true));
        let w = report.witness.unwrap();
        assert!(w.replayed);
        assert_eq!(w.indices.len(), 3);
    }

    #[test]
    fn mean_breaks_at_one_point() {
        for n in [3usize, 5, 6, 10] {
            let values: Vec<f64> = (0..n).map(|i| i as f64 * 0.7 - 1.0).collect();
            let p = uni(&values);
            let plan = ContaminationPlan::default_for(&p).unwrap();
            let report = fsbp_search(&est(EstimatorKind::Mean), &p, &plan, 2).unwrap();
            assert_eq!(report.k_break, Some(1), "n = {n}");
            assert_eq!(report.closed_form, Some(1.0 / n as f64));
        }
    }

    #[test]
    fn collapsed_scale_is_infinitely_far_from_any_positive_scale() {
        let p = uni(&[0.0, 0.0, 0.0, 1.0, 2.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::Mad), &p, &plan, 3).unwrap();
        assert_eq!(report.baseline, ParameterPoint::Scale { value: 0.0 });
        assert_eq!(report.k_break, Some(1));
        assert_eq!(report.closed_form, Some(0.0));
        // The witness trace records unbounded distances: the collapsed
        // scale is infinitely far (log-scale) from any positive one.
        let w = report.witness.unwrap();
        assert!(w.trace.iter().any(|t| t.status == TraceStatus::Unbounded));
    }

    #[test]
    fn tie_heavy_scale_sample_breaks_by_implosion_at_one_point() {
        let p = uni(&[0.0, 0.0, 0.0, 1.0, 2.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::MadStar), &p, &plan, 3).unwrap();
        assert_eq!(report.k_break, Some(1));
        assert_eq!(report.fsbp_lower, Some(0.2));
        assert_eq!(report.upper.value(), Some(0.2));
        let w = report.witness.unwrap();
        assert!(
            matches!(w.placement, Placement::ClusterAtPoint { ref anchor } if anchor == &vec![0.0])
        );
        assert_eq!(w.indices, vec![3]);
        // Final sample is {0,0,0,delta,2} with delta = 1/lambda at the last
        // ladder rung.
        assert_eq!(w.final_sample[3][0], 1.0 / w.final_lambda);
        assert_eq!(w.final_sample.iter().filter(|pt| pt[0] == 0.0).count(), 3);
    }

    #[test]
    fn distinct_scale_sample_needs_two_points() {
        let p = uni(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::MadStar), &p, &plan, 3).unwrap();
        assert_eq!(report.k_break, Some(2));
        assert_eq!(report.upper.value(), Some(0.4));
        assert_eq!(report.next_k_also_breaks, Some(true));
        let mad = fsbp_search(&est(EstimatorKind::Mad), &p, &plan, 3).unwrap();
        assert_eq!(mad.k_break, Some(2));
        assert!((mad.closed_form.unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn bounded_slope_never_diverges() {
        let kind = SampleSpaceKind::RegressionPair { carrier_dim: 1 };
        let points: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![(i as f64 - 3.5) * 0.5, i as f64 * 0.3 - 1.0])
            .collect();
        let p = EmpiricalMeasure::from_points(points, kind).unwrap();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::LsOriginBounded), &p, &plan, 8).unwrap();
        assert_eq!(report.k_break, None);
        assert_eq!(report.upper, UpperBoundReport::NoDeclaredFamily);
        assert_eq!(report.closed_form, Some(1.0));
        assert!(report.max_parameter_norm <= 8.0 + 1e-12);
    }

    #[test]
    fn unbounded_slope_breaks_immediately() {
        let kind = SampleSpaceKind::RegressionPair { carrier_dim: 1 };
        let points: Vec<Vec<f64>> = (0..5)
            .map(|i| vec![1.0 + i as f64, 2.0 * (1.0 + i as f64)])
            .collect();
        let p = EmpiricalMeasure::from_points(points, kind).unwrap();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::LsOrigin), &p, &plan, 2).unwrap();
        assert_eq!(report.k_break, Some(1));
    }

    fn generic_growth_sample() -> EmpiricalMeasure {
        // (response, time) pairs with strictly interior responses.
        let points: Vec<Vec<f64>> = (-3..=3)
            .map(|t| {
                let t = t as f64;
                vec![crate::estimators::sigmoid(0.5 * t), t]
            })
            .collect();
        EmpiricalMeasure::from_points(points, SampleSpaceKind::TimePair).unwrap()
    }

    #[test]
    fn growth_breaks_only_when_one_point_remains() {
        let p = generic_growth_sample();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::GrowthFit), &p, &plan, 6).unwrap();
        assert_eq!(report.k_break, Some(6));
        assert!((report.closed_form.unwrap() - 6.0 / 7.0).abs() < 1e-12);
        assert_eq!(report.next_k_also_breaks, Some(true));
        // The break leaves one informative point: every replacement sits on
        // one side of it with an extreme response, so the step limit fits
        // exactly and the minimizer runs away.
        let w = report.witness.unwrap();
        assert!(w.trace.iter().any(|t| t.status == TraceStatus::Unbounded));
        assert_eq!(w.placement, Placement::ExplodePositive);
        assert_eq!(w.indices, vec![0, 1, 2, 3, 4, 5]);
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
    fn regularized_logistic_survives_heavy_contamination() {
        let p = logistic_sample();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::LogisticRegularized), &p, &plan, 6).unwrap();
        assert_eq!(report.k_break, None, "witness: {:?}", report.witness);
        assert!(
            report.max_parameter_norm < 1e3,
            "parameter norm {}",
            report.max_parameter_norm
        );
        assert_eq!(report.upper, UpperBoundReport::NoBreakingElements);
        assert!((report.closed_form.unwrap() - 0.875).abs() < 1e-12);
    }

    #[test]
    fn saturating_fit_bound_holds() {
        let p = EmpiricalMeasure::from_points(
            vec![vec![1.0, 0.5], vec![2.0, 2.0 / 3.0], vec![4.0, 0.8]],
            SampleSpaceKind::PositiveCarrier,
        )
        .unwrap();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::MichaelisMentenFit), &p, &plan, 2).unwrap();
        // Zero degenerate mass: the bound is floor((n+1)/2)/n = 2/3.
        assert_eq!(report.upper.value(), Some(2.0 / 3.0));
        if let Some(lower) = report.fsbp_lower {
            assert!(lower <= 2.0 / 3.0 + 1e-12);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let p = uni(&[1.5, 1.8, 1.3, 1.5, 1.8, 1.3]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let a = fsbp_search(&est(EstimatorKind::Median), &p, &plan, 4).unwrap();
        let b = fsbp_search(&est(EstimatorKind::Median), &p, &plan, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn search_validates_inputs() {
        let p = uni(&[1.0, 2.0, 3.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        assert!(fsbp_search(&est(EstimatorKind::Median), &p, &plan, 0).is_err());
        assert!(fsbp_search(&est(EstimatorKind::Median), &p, &plan, 4).is_err());
        let mut bad = plan.clone();
        bad.ladder = vec![10.0];
        assert!(bad.validate().is_err());
        let mut bad = plan.clone();
        bad.placements.clear();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mixture_attack_on_mean_diverges_at_smallest_epsilon() {
        let p = uni(&[1.0, 2.0, 3.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let grid = default_epsilon_grid();
        let report = contamination_breakdown(
            &est(EstimatorKind::Mean),
            &p,
            ProbMetricKind::TotalVariation,
            &plan,
            &grid,
        )
        .unwrap();
        assert_eq!(report.first_diverging_epsilon, Some(0.05));
    }

    #[test]
    fn mixture_attack_on_median_needs_half() {
        let p = uni(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let grid = default_epsilon_grid();
        let report = contamination_breakdown(
            &est(EstimatorKind::Median),
            &p,
            ProbMetricKind::TotalVariation,
            &plan,
            &grid,
        )
        .unwrap();
        let eps = report.first_diverging_epsilon.unwrap();
        assert!((eps - 0.5).abs() < 1e-12, "diverged at {eps}");
    }

    #[test]
    fn mixture_attack_on_interval_scale_diverges_past_four_ninths() {
        let p = uni(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let grid = default_epsilon_grid();
        let report = contamination_breakdown(
            &est(EstimatorKind::MadStar),
            &p,
            ProbMetricKind::Kuiper { intervals: 1 },
            &plan,
            &grid,
        )
        .unwrap();
        // Single-atom explosion first succeeds past mixture weight 4/9, so
        // the first diverging grid value is 0.45.
        let eps = report.first_diverging_epsilon.unwrap();
        assert!((eps - 0.45).abs() < 1e-12, "diverged at {eps}");
        // Consistency with the degeneracy analysis: the attack shows up at
        // a grid value at least (1 - delta)/3.
        let delta = degeneracy::delta_affine(&p, 1).unwrap().value;
        assert!(eps >= (1.0 - delta) / 3.0 - 1e-12);
    }

    #[test]
    fn mixture_grid_is_validated() {
        let p = uni(&[1.0, 2.0, 3.0]);
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let e = est(EstimatorKind::Mean);
        let tv = ProbMetricKind::TotalVariation;
        assert!(contamination_breakdown(&e, &p, tv, &plan, &[]).is_err());
        assert!(contamination_breakdown(&e, &p, tv, &plan, &[0.3, 0.2]).is_err());
        assert!(contamination_breakdown(&e, &p, tv, &plan, &[0.5, 1.0]).is_err());
    }

    #[test]
    fn planar_spatial_median_breaks_at_half() {
        let p = EmpiricalMeasure::from_points(
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
        .unwrap();
        let plan = ContaminationPlan::default_for(&p).unwrap();
        let report = fsbp_search(&est(EstimatorKind::L1Median), &p, &plan, 3).unwrap();
        assert_eq!(report.k_break, Some(3));
        assert_eq!(report.upper.value(), Some(0.5));
    }
}
