//! Weighted empirical measures on small sample spaces.
//!
//! A measure is a finite list of points with nonnegative weights summing to 1.
//! Points are kept in input order and may repeat; mass queries aggregate
//! entries that are coordinatewise identical, and [`mix`] merges such
//! duplicates so that tie counting stays exact.
//!
//! Two contamination mechanisms live here:
//! - [`EmpiricalMeasure::replace`] swaps out points at given indices
//!   (finite-sample replacement contamination), and
//! - [`mix`] forms the gross-error mixture `alpha * P + (1 - alpha) * Q`.
//!
//! Distances between measures ([`prob_distance`]) are bounded by 1 and
//! contract under mixing with a common component: mixing both arguments with
//! mass `alpha` of the same measure caps the distance at `1 - alpha`.

use crate::error::{Error, Result};
use std::collections::HashMap;

pub type Point = Vec<f64>;

/// What the coordinates of a point mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSpaceKind {
    /// Points in R^dim.
    Euclidean { dim: usize },
    /// Carrier then response: (x_1, .., x_k, y).
    RegressionPair { carrier_dim: usize },
    /// 0/1 label then covariates: (y, x_1, .., x_k).
    BinaryResponse { covariate_dim: usize },
    /// Observation then time: (y, t).
    TimePair,
    /// Positive carrier then response: (x, y) with x > 0.
    PositiveCarrier,
}

impl SampleSpaceKind {
    pub fn point_dim(&self) -> usize {
        match *self {
            SampleSpaceKind::Euclidean { dim } => dim,
            SampleSpaceKind::RegressionPair { carrier_dim } => carrier_dim + 1,
            SampleSpaceKind::BinaryResponse { covariate_dim } => covariate_dim + 1,
            SampleSpaceKind::TimePair => 2,
            SampleSpaceKind::PositiveCarrier => 2,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            SampleSpaceKind::Euclidean { dim } => format!("euclidean:{dim}"),
            SampleSpaceKind::RegressionPair { carrier_dim } => format!("regression:{carrier_dim}"),
            SampleSpaceKind::BinaryResponse { covariate_dim } => format!("binary:{covariate_dim}"),
            SampleSpaceKind::TimePair => "time".to_string(),
            SampleSpaceKind::PositiveCarrier => "positive".to_string(),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let dim = |what: &str| -> Result<usize> {
            arg.ok_or_else(|| Error::UnknownName {
                what: "sample-space kind (missing dimension)".into(),
                name: name.into(),
            })?
            .parse::<usize>()
            .map_err(|_| Error::UnknownName {
                what: format!("{what} dimension"),
                name: name.into(),
            })
        };
        match head {
            "euclidean" => Ok(SampleSpaceKind::Euclidean {
                dim: dim("euclidean")?,
            }),
            "regression" => Ok(SampleSpaceKind::RegressionPair {
                carrier_dim: dim("regression carrier")?,
            }),
            "binary" => Ok(SampleSpaceKind::BinaryResponse {
                covariate_dim: dim("binary covariate")?,
            }),
            "time" => Ok(SampleSpaceKind::TimePair),
            "positive" => Ok(SampleSpaceKind::PositiveCarrier),
            _ => Err(Error::UnknownName {
                what: "sample-space kind".into(),
                name: name.into(),
            }),
        }
    }

    fn validate_point(&self, index: usize, p: &[f64]) -> Result<()> {
        let expected = self.point_dim();
        if p.len() != expected {
            return Err(Error::PointShape {
                index,
                expected,
                got: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("point {index}"),
            });
        }
        match *self {
            SampleSpaceKind::BinaryResponse { .. } => {
                if p[0] != 0.0 && p[0] != 1.0 {
                    return Err(Error::PointDomain {
                        index,
                        reason: format!("label must be 0 or 1, got {}", p[0]),
                    });
                }
            }
            SampleSpaceKind::PositiveCarrier => {
                if p[0] <= 0.0 {
                    return Err(Error::PointDomain {
                        index,
                        reason: format!("carrier must be positive, got {}", p[0]),
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Bit-exact key for a point, with -0.0 folded onto 0.0 so that numerically
/// equal points always merge.
fn coord_key(p: &[f64]) -> Vec<u64> {
    p.iter()
        .map(|&v| if v == 0.0 { 0.0f64 } else { v }.to_bits())
        .collect()
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A finitely supported probability measure: points with weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    kind: SampleSpaceKind,
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Uniform weights 1/n; points kept in input order, duplicates allowed.
    pub fn from_points(points: Vec<Point>, kind: SampleSpaceKind) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let w = 1.0 / n as f64;
        Self::new(points, vec![w; n], kind)
    }

    /// Explicit weights; they must be nonnegative and sum to 1 within 1e-12.
    pub fn new(points: Vec<Point>, weights: Vec<f64>, kind: SampleSpaceKind) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidArgument {
                what: format!("{} points but {} weights", points.len(), weights.len()),
            });
        }
        for (i, p) in points.iter().enumerate() {
            kind.validate_point(i, p)?;
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("weight {i}"),
                });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index: i });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum { sum });
        }
        Ok(EmpiricalMeasure {
            kind,
            points,
            weights,
        })
    }

    /// All mass at a single point.
    pub fn dirac(point: Point, kind: SampleSpaceKind) -> Result<Self> {
        Self::new(vec![point], vec![1.0], kind)
    }

    /// Convenience constructor for univariate samples.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        Self::from_points(
            values.iter().map(|&v| vec![v]).collect(),
            SampleSpaceKind::Euclidean { dim: 1 },
        )
    }

    pub fn kind(&self) -> SampleSpaceKind {
        self.kind
    }

    /// Number of stored entries (duplicates counted separately).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Entries as (value, weight) pairs; only for 1-dimensional Euclidean data.
    pub fn scalars(&self) -> Result<Vec<(f64, f64)>> {
        match self.kind {
            SampleSpaceKind::Euclidean { dim: 1 } => Ok(self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(p, &w)| (p[0], w))
                .collect()),
            _ => Err(Error::UnivariateOnly {
                what: "scalar view".into(),
            }),
        }
    }

    /// Aggregated mass sitting exactly on `point`.
    pub fn mass_at(&self, point: &[f64]) -> f64 {
        let key = coord_key(point);
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| coord_key(p) == key)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Support with duplicate entries merged; order of first occurrence.
    pub fn merged_support(&self) -> Vec<(Point, f64)> {
        let mut order: Vec<Point> = Vec::new();
        let mut acc: HashMap<Vec<u64>, f64> = HashMap::new();
        for (p, &w) in self.points.iter().zip(&self.weights) {
            let key = coord_key(p);
            if let Some(slot) = acc.get_mut(&key) {
                *slot += w;
            } else {
                acc.insert(key, w);
                order.push(p.clone());
            }
        }
        order
            .into_iter()
            .map(|p| {
                let w = acc[&coord_key(&p)];
                (p, w)
            })
            .collect()
    }

    /// Largest aggregated single-point mass.
    pub fn max_point_mass(&self) -> (f64, Point) {
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for (p, w) in self.merged_support() {
            if w > best.0 {
                best = (w, p);
            }
        }
        best
    }

    /// Coordinatewise range (max - min), the natural scale of the sample.
    pub fn coordinate_spread(&self) -> f64 {
        let dim = self.kind.point_dim();
        let mut spread: f64 = 0.0;
        for j in 0..dim {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in &self.points {
                lo = lo.min(p[j]);
                hi = hi.max(p[j]);
            }
            spread = spread.max(hi - lo);
        }
        spread
    }

    /// Coordinatewise weighted median (a cheap, robust reference point).
    pub fn coordinatewise_median(&self) -> Point {
        let dim = self.kind.point_dim();
        (0..dim)
            .map(|j| {
                let mut col: Vec<(f64, f64)> = self
                    .points
                    .iter()
                    .zip(&self.weights)
                    .map(|(p, &w)| (p[j], w))
                    .collect();
                lower_weighted_median(&mut col)
            })
            .collect()
    }

    /// Replacement contamination: a copy with the points at `indices` swapped
    /// for `new_points` (same weights, same positions).
    pub fn replace(&self, indices: &[usize], new_points: &[Point]) -> Result<Self> {
        if indices.len() != new_points.len() {
            return Err(Error::ReplacementCount {
                expected: indices.len(),
                got: new_points.len(),
            });
        }
        let mut seen = vec![false; self.points.len()];
        let mut points = self.points.clone();
        for (&i, p) in indices.iter().zip(new_points) {
            if i >= points.len() {
                return Err(Error::ReplacementIndex {
                    index: i,
                    len: points.len(),
                });
            }
            if seen[i] {
                return Err(Error::DuplicateIndex { index: i });
            }
            seen[i] = true;
            self.kind.validate_point(i, p)?;
            points[i] = p.clone();
        }
        Ok(EmpiricalMeasure {
            kind: self.kind,
            points,
            weights: self.weights.clone(),
        })
    }

    /// True when both measures put the same mass on the same points, up to
    /// `tol` per merged support point.
    pub fn same_distribution(&self, other: &EmpiricalMeasure, tol: f64) -> bool {
        if self.kind != other.kind {
            return false;
        }
        let mut masses: HashMap<Vec<u64>, f64> = HashMap::new();
        for (p, w) in self.merged_support() {
            masses.insert(coord_key(&p), w);
        }
        let mut seen = 0usize;
        for (p, w) in other.merged_support() {
            match masses.get(&coord_key(&p)) {
                Some(&m) if (m - w).abs() <= tol => seen += 1,
                _ => return false,
            }
        }
        seen == masses.len()
    }
}

/// Lower weighted median: the smallest value whose cumulative weight reaches
/// one half. The comparison carries a 1e-9 slack so that cumulative weights
/// that are exactly one half in exact arithmetic (e.g. three weights of 1/6)
/// are not missed to floating-point rounding.
pub fn lower_weighted_median(values: &mut [(f64, f64)]) -> f64 {
    debug_assert!(!values.is_empty());
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut cum = 0.0;
    for &(v, w) in values.iter() {
        cum += w;
        if cum >= 0.5 - 1e-9 {
            return v;
        }
    }
    values.last().unwrap().0
}

/// Gross-error mixture `alpha * P + (1 - alpha) * Q`; duplicate points are
/// merged by weight accumulation (exact coordinate equality).
pub fn mix(p: &EmpiricalMeasure, q: &EmpiricalMeasure, alpha: f64) -> Result<EmpiricalMeasure> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::MixtureWeight { alpha });
    }
    if p.kind != q.kind {
        return Err(Error::KindMismatch {
            expected: p.kind.label(),
            got: q.kind.label(),
        });
    }
    let mut order: Vec<Point> = Vec::new();
    let mut acc: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut add = |point: &Point, w: f64| {
        let key = coord_key(point);
        if let Some(slot) = acc.get_mut(&key) {
            *slot += w;
        } else {
            acc.insert(key, w);
            order.push(point.clone());
        }
    };
    for (pt, &w) in p.points.iter().zip(&p.weights) {
        add(pt, alpha * w);
    }
    for (pt, &w) in q.points.iter().zip(&q.weights) {
        add(pt, (1.0 - alpha) * w);
    }
    let weights: Vec<f64> = order.iter().map(|pt| acc[&coord_key(pt)]).collect();
    EmpiricalMeasure::new(order, weights, p.kind)
}

/// Distances between probability measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbMetricKind {
    /// Half the total absolute difference of point masses.
    TotalVariation,
    /// Largest discrepancy |P(B) - Q(B)| over unions of `intervals` closed
    /// intervals; univariate samples only.
    Kuiper { intervals: usize },
}

impl ProbMetricKind {
    pub fn label(&self) -> String {
        match *self {
            ProbMetricKind::TotalVariation => "tv".into(),
            ProbMetricKind::Kuiper { intervals } => format!("kuiper:{intervals}"),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        if name == "tv" || name == "total-variation" {
            return Ok(ProbMetricKind::TotalVariation);
        }
        if let Some(m) = name
            .strip_prefix("kuiper:")
            .or(name.strip_prefix("kuiper-"))
        {
            let intervals = m.parse::<usize>().map_err(|_| Error::UnknownName {
                what: "interval count".into(),
                name: name.into(),
            })?;
            return Ok(ProbMetricKind::Kuiper { intervals });
        }
        Err(Error::UnknownName {
            what: "probability metric".into(),
            name: name.into(),
        })
    }
}

/// Distance between two measures on the same sample space. Always in [0, 1].
pub fn prob_distance(
    kind: ProbMetricKind,
    p: &EmpiricalMeasure,
    q: &EmpiricalMeasure,
) -> Result<f64> {
    if p.kind() != q.kind() {
        return Err(Error::KindMismatch {
            expected: p.kind().label(),
            got: q.kind().label(),
        });
    }
    match kind {
        ProbMetricKind::TotalVariation => Ok(total_variation(p, q)),
        ProbMetricKind::Kuiper { intervals } => kuiper(p, q, intervals),
    }
}

fn total_variation(p: &EmpiricalMeasure, q: &EmpiricalMeasure) -> f64 {
    let mut masses: HashMap<Vec<u64>, (f64, f64)> = HashMap::new();
    for (pt, w) in p.merged_support() {
        masses.entry(coord_key(&pt)).or_insert((0.0, 0.0)).0 = w;
    }
    for (pt, w) in q.merged_support() {
        masses.entry(coord_key(&pt)).or_insert((0.0, 0.0)).1 = w;
    }
    0.5 * masses.values().map(|&(a, b)| (a - b).abs()).sum::<f64>()
}

/// Exact Kuiper-style distance for discrete univariate measures: the maximal
/// |P(B) - Q(B)| over unions B of at most `m` closed intervals. For discrete
/// measures only which support points a candidate interval covers matters, so
/// the supremum is attained on contiguous runs of the sorted union support and
/// reduces to the best sum of at most `m` disjoint runs of signed masses.
fn kuiper(p: &EmpiricalMeasure, q: &EmpiricalMeasure, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument {
            what: "Kuiper needs at least one interval".into(),
        });
    }
    if !matches!(p.kind(), SampleSpaceKind::Euclidean { dim: 1 }) {
        return Err(Error::UnivariateOnly {
            what: "Kuiper distance".into(),
        });
    }
    let mut signed: HashMap<u64, f64> = HashMap::new();
    for (pt, w) in p.merged_support() {
        *signed.entry(coord_key(&pt)[0]).or_insert(0.0) += w;
    }
    for (pt, w) in q.merged_support() {
        *signed.entry(coord_key(&pt)[0]).or_insert(0.0) -= w;
    }
    let mut entries: Vec<(f64, f64)> = signed
        .into_iter()
        .map(|(bits, s)| (f64::from_bits(bits), s))
        .collect();
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let s: Vec<f64> = entries.iter().map(|&(_, v)| v).collect();
    let neg: Vec<f64> = s.iter().map(|v| -v).collect();
    Ok(max_disjoint_runs(&s, m).max(max_disjoint_runs(&neg, m)))
}

/// Best total of at most `m` disjoint contiguous runs (possibly none).
fn max_disjoint_runs(s: &[f64], m: usize) -> f64 {
    let n = s.len();
    // open[i]: best using the first i values with the i-th inside the current
    // run; closed[i]: best using the first i values with the current run shut.
    let mut closed = vec![0.0f64; n + 1];
    for _ in 1..=m {
        let mut open = vec![f64::NEG_INFINITY; n + 1];
        let mut next_closed = vec![0.0f64; n + 1];
        for i in 1..=n {
            open[i] = open[i - 1].max(closed[i - 1]) + s[i - 1];
            next_closed[i] = next_closed[i - 1].max(open[i]);
        }
        closed = next_closed;
    }
    closed[n].max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(values: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::univariate(values).unwrap()
    }

    #[test]
    fn uniform_weights_and_order() {
        let p = uni(&[3.0, 1.0, 2.0]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.point(0), &[3.0]);
        assert!((p.weight(1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            EmpiricalMeasure::univariate(&[]),
            Err(Error::EmptySample)
        ));
        assert!(EmpiricalMeasure::univariate(&[f64::NAN]).is_err());
        let e = EmpiricalMeasure::new(
            vec![vec![0.0], vec![1.0]],
            vec![0.7, 0.7],
            SampleSpaceKind::Euclidean { dim: 1 },
        );
        assert!(matches!(e, Err(Error::WeightSum { .. })));
        let e = EmpiricalMeasure::from_points(
            vec![vec![0.5, 1.0]],
            SampleSpaceKind::BinaryResponse { covariate_dim: 1 },
        );
        assert!(matches!(e, Err(Error::PointDomain { .. })));
        let e =
            EmpiricalMeasure::from_points(vec![vec![-1.0, 1.0]], SampleSpaceKind::PositiveCarrier);
        assert!(matches!(e, Err(Error::PointDomain { .. })));
    }

    #[test]
    fn mass_aggregates_duplicates() {
        let p = uni(&[0.0, 0.0, 0.0, 1.0, 2.0]);
        assert!((p.mass_at(&[0.0]) - 0.6).abs() < 1e-12);
        let (m, pt) = p.max_point_mass();
        assert!((m - 0.6).abs() < 1e-12);
        assert_eq!(pt, vec![0.0]);
    }

    #[test]
    fn replace_swaps_positions() {
        let p = uni(&[0.0, 0.0, 0.0, 1.0, 2.0]);
        let q = p.replace(&[3], &[vec![1e-9]]).unwrap();
        assert_eq!(q.point(3), &[1e-9]);
        assert_eq!(q.point(4), &[2.0]);
        // Replacing back restores the original sample.
        let back = q.replace(&[3], &[vec![1.0]]).unwrap();
        assert_eq!(back, p);
        assert!(matches!(
            p.replace(&[9], &[vec![0.0]]),
            Err(Error::ReplacementIndex { .. })
        ));
        assert!(matches!(
            p.replace(&[1, 1], &[vec![0.0], vec![0.0]]),
            Err(Error::DuplicateIndex { .. })
        ));
    }

    #[test]
    fn mix_merges_duplicates() {
        let p = uni(&[0.0, 1.0]);
        let q = uni(&[1.0, 2.0]);
        let m = mix(&p, &q, 0.5).unwrap();
        assert_eq!(m.len(), 3);
        assert!((m.mass_at(&[1.0]) - 0.5).abs() < 1e-12);
        assert!(mix(&p, &q, 0.0).is_err());
        assert!(mix(&p, &q, 1.0).is_err());
    }

    #[test]
    fn mix_with_itself_is_identity() {
        let p = uni(&[1.0, 2.0, 3.0]);
        let m = mix(&p, &p, 0.3).unwrap();
        assert!(m.same_distribution(&p, 1e-12));
    }

    #[test]
    fn tv_basic_values() {
        let d0 = EmpiricalMeasure::dirac(vec![0.0], SampleSpaceKind::Euclidean { dim: 1 }).unwrap();
        let d1 = EmpiricalMeasure::dirac(vec![1.0], SampleSpaceKind::Euclidean { dim: 1 }).unwrap();
        // Disjoint supports realize the largest possible distance.
        assert!((prob_distance(ProbMetricKind::TotalVariation, &d0, &d1).unwrap() - 1.0) < 1e-15);
        let p = uni(&[0.0, 1.0]);
        assert!(
            (prob_distance(ProbMetricKind::TotalVariation, &p, &d0).unwrap() - 0.5).abs() < 1e-12
        );
    }

    #[test]
    fn kuiper_one_interval_example() {
        // Uniform on {0, 1} against all mass at 0: the best single closed
        // interval is {1} (or {0}), each giving discrepancy one half.
        let p = uni(&[0.0, 1.0]);
        let d0 = EmpiricalMeasure::dirac(vec![0.0], SampleSpaceKind::Euclidean { dim: 1 }).unwrap();
        let k1 = prob_distance(ProbMetricKind::Kuiper { intervals: 1 }, &p, &d0).unwrap();
        assert!((k1 - 0.5).abs() < 1e-12);
    }

    /// Brute-force oracle: enumerate every union of at most m index runs.
    fn kuiper_oracle(p: &EmpiricalMeasure, q: &EmpiricalMeasure, m: usize) -> f64 {
        let mut signed: Vec<(f64, f64)> = Vec::new();
        for (pt, w) in p.merged_support() {
            match signed.iter_mut().find(|(v, _)| *v == pt[0]) {
                Some(slot) => slot.1 += w,
                None => signed.push((pt[0], w)),
            }
        }
        for (pt, w) in q.merged_support() {
            match signed.iter_mut().find(|(v, _)| *v == pt[0]) {
                Some(slot) => slot.1 -= w,
                None => signed.push((pt[0], -w)),
            }
        }
        signed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let s: Vec<f64> = signed.iter().map(|&(_, v)| v).collect();
        let n = s.len();
        let mut best = 0.0f64;
        // Enumerate subsets of support points; keep those forming <= m runs.
        for mask in 0u32..(1 << n) {
            let mut runs = 0;
            let mut prev = false;
            for i in 0..n {
                let cur = mask >> i & 1 == 1;
                if cur && !prev {
                    runs += 1;
                }
                prev = cur;
            }
            if runs > m {
                continue;
            }
            let total: f64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).sum();
            best = best.max(total.abs());
        }
        best
    }

    #[test]
    fn kuiper_matches_brute_force() {
        let p = uni(&[0.0, 1.0, 2.0, 5.0, 5.0, 9.0]);
        let q = uni(&[1.0, 2.0, 2.0, 3.0, 7.0]);
        for m in 1..=4 {
            let fast = prob_distance(ProbMetricKind::Kuiper { intervals: m }, &p, &q).unwrap();
            let slow = kuiper_oracle(&p, &q, m);
            assert!(
                (fast - slow).abs() < 1e-12,
                "m={m}: fast={fast} oracle={slow}"
            );
        }
    }

    #[test]
    fn kuiper_monotone_in_intervals_and_below_tv() {
        let p = uni(&[0.0, 0.5, 1.5, 2.0, 4.0]);
        let q = uni(&[0.5, 1.0, 2.5, 3.0]);
        let tv = prob_distance(ProbMetricKind::TotalVariation, &p, &q).unwrap();
        let mut prev = 0.0;
        for m in 1..=5 {
            let k = prob_distance(ProbMetricKind::Kuiper { intervals: m }, &p, &q).unwrap();
            assert!(k + 1e-15 >= prev);
            assert!(k <= tv + 1e-15);
            prev = k;
        }
        // With enough intervals the Kuiper distance saturates at total variation.
        let k5 = prob_distance(ProbMetricKind::Kuiper { intervals: 5 }, &p, &q).unwrap();
        assert!((k5 - tv).abs() < 1e-12);
    }

    #[test]
    fn mixing_contracts_distance() {
        let p = uni(&[0.0, 1.0, 2.0]);
        let q1 = uni(&[5.0, 6.0]);
        let q2 = uni(&[-3.0]);
        for &alpha in &[0.1, 0.5, 0.9] {
            let a = mix(&p, &q1, alpha).unwrap();
            let b = mix(&p, &q2, alpha).unwrap();
            for kind in [
                ProbMetricKind::TotalVariation,
                ProbMetricKind::Kuiper { intervals: 1 },
                ProbMetricKind::Kuiper { intervals: 2 },
            ] {
                let d = prob_distance(kind, &a, &b).unwrap();
                assert!(d <= 1.0 - alpha + 1e-12, "{kind:?} alpha={alpha}: d={d}");
            }
        }
    }

    #[test]
    fn kuiper_rejects_multivariate() {
        let p = EmpiricalMeasure::from_points(
            vec![vec![0.0, 0.0]],
            SampleSpaceKind::Euclidean { dim: 2 },
        )
        .unwrap();
        assert!(matches!(
            prob_distance(ProbMetricKind::Kuiper { intervals: 1 }, &p, &p),
            Err(Error::UnivariateOnly { .. })
        ));
    }

    #[test]
    fn kind_labels_round_trip() {
        for kind in [
            SampleSpaceKind::Euclidean { dim: 3 },
            SampleSpaceKind::RegressionPair { carrier_dim: 2 },
            SampleSpaceKind::BinaryResponse { covariate_dim: 1 },
            SampleSpaceKind::TimePair,
            SampleSpaceKind::PositiveCarrier,
        ] {
            assert_eq!(SampleSpaceKind::parse(&kind.label()).unwrap(), kind);
        }
    }
}
