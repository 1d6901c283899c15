//! Transformation groups acting on samples and on estimator parameters.
//!
//! Every group element `g` plays two coupled roles:
//!
//! - it moves data: a sample measure `P` becomes `P^g` (same weights,
//!   transformed points), and
//! - it moves fitted parameters through an induced map `h_g`, chosen so that
//!   an equivariant estimator `T` satisfies `T(P^g) = h_g(T(P))`.
//!
//! An element is *breaking* for a parameter metric `D` when iterating it
//! drives every parameter value off to infinity: `inf_t D(h_{g^n}(t), t)`
//! grows without bound in `n`. Breaking elements are what tie group structure
//! to breakdown — an estimator equivariant under a family containing a
//! breaking element cannot have a replacement breakdown point above the
//! degeneracy bound of its sample (see [`crate::degeneracy`]).
//!
//! One classification here is deliberately conservative: affine elements
//! paired with the Euclidean location metric always report non-breaking. A
//! scaling fixes the parameter value at its center, so its iterates never
//! move *all* parameters uniformly, and the translation part of a general
//! affine element is not examined separately. Location estimators should
//! declare the translation family, for which the breaking test is exact.

use crate::error::{Error, Result};
use crate::measure::{EmpiricalMeasure, Point, SampleSpaceKind};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::ser::{Serialize, Serializer};

/// A value an estimator can return, tagged by what it parameterizes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ParameterPoint {
    /// A point in R^d.
    Location { coords: Vec<f64> },
    /// A positive spread value (zero marks a collapsed fit).
    Scale { value: f64 },
    /// A symmetric positive-definite d x d matrix, stored by rows.
    Scatter { matrix: Vec<Vec<f64>> },
    /// Coefficients of a linear fit through the origin.
    Slope { coeffs: Vec<f64> },
    /// Logistic-regression parameters: success probability s(intercept + x . slope).
    LogisticTheta { intercept: f64, slope: Vec<f64> },
    /// Sigmoid trend over time: s(intercept + slope * t).
    GrowthCurve { intercept: f64, slope: f64 },
    /// Saturating curve x -> a x / (c x + 1/a) with a > 0, c > 0.
    MichaelisMenten { a: f64, c: f64 },
}

impl ParameterPoint {
    pub fn label(&self) -> &'static str {
        match self {
            ParameterPoint::Location { .. } => "location",
            ParameterPoint::Scale { .. } => "scale",
            ParameterPoint::Scatter { .. } => "scatter",
            ParameterPoint::Slope { .. } => "slope",
            ParameterPoint::LogisticTheta { .. } => "logistic-theta",
            ParameterPoint::GrowthCurve { .. } => "growth-curve",
            ParameterPoint::MichaelisMenten { .. } => "michaelis-menten",
        }
    }

    /// All coordinates as one flat vector (rows concatenated for scatter).
    pub fn flatten(&self) -> Vec<f64> {
        match self {
            ParameterPoint::Location { coords } => coords.clone(),
            ParameterPoint::Scale { value } => vec![*value],
            ParameterPoint::Scatter { matrix } => matrix.iter().flatten().copied().collect(),
            ParameterPoint::Slope { coeffs } => coeffs.clone(),
            ParameterPoint::LogisticTheta { intercept, slope } => {
                let mut v = vec![*intercept];
                v.extend_from_slice(slope);
                v
            }
            ParameterPoint::GrowthCurve { intercept, slope } => vec![*intercept, *slope],
            ParameterPoint::MichaelisMenten { a, c } => vec![*a, *c],
        }
    }
}

/// Distances on parameter space. All are pseudometrics: symmetric, zero on
/// the diagonal, triangle inequality; values may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamMetricKind {
    /// Straight-line distance between flattened coordinates.
    Euclidean,
    /// |ln(s1 / s2)| between positive scales; infinite if either is not
    /// strictly positive, so a collapsed scale is infinitely far from any
    /// healthy one.
    ScaleLog,
    /// |ln det S1 - ln det S2| between positive-definite scatters.
    LogDet,
    /// |a1 - a2| + |1/a1 - 1/a2| + |c1 - c2| between saturating curves;
    /// diverges when the initial slope explodes, collapses, or the
    /// saturation constant runs away.
    MichaelisMenten,
}

impl ParamMetricKind {
    pub fn label(&self) -> &'static str {
        match self {
            ParamMetricKind::Euclidean => "euclidean",
            ParamMetricKind::ScaleLog => "scale-log",
            ParamMetricKind::LogDet => "log-det",
            ParamMetricKind::MichaelisMenten => "michaelis-menten",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "euclidean" => Ok(ParamMetricKind::Euclidean),
            "scale-log" => Ok(ParamMetricKind::ScaleLog),
            "log-det" => Ok(ParamMetricKind::LogDet),
            "michaelis-menten" => Ok(ParamMetricKind::MichaelisMenten),
            _ => Err(Error::UnknownName {
                what: "parameter metric".into(),
                name: name.into(),
            }),
        }
    }

    /// Metrics that measure multiplicative change; divergence detection
    /// expects them to grow additively as contamination grows geometrically.
    pub fn is_log_scale(&self) -> bool {
        matches!(self, ParamMetricKind::ScaleLog | ParamMetricKind::LogDet)
    }

    pub fn distance(&self, s: &ParameterPoint, t: &ParameterPoint) -> Result<f64> {
        match (self, s, t) {
            (ParamMetricKind::Euclidean, _, _) => {
                if std::mem::discriminant(s) != std::mem::discriminant(t) {
                    return Err(Error::IncompatibleMetric {
                        metric: self.label().into(),
                        parameter: format!("{} vs {}", s.label(), t.label()),
                    });
                }
                let a = s.flatten();
                let b = t.flatten();
                if a.len() != b.len() {
                    return Err(Error::IncompatibleMetric {
                        metric: self.label().into(),
                        parameter: format!(
                            "{} with {} vs {} coordinates",
                            s.label(),
                            a.len(),
                            b.len()
                        ),
                    });
                }
                if a.iter().chain(&b).any(|v| !v.is_finite()) {
                    return Ok(f64::INFINITY);
                }
                Ok(a.iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt())
            }
            (
                ParamMetricKind::ScaleLog,
                ParameterPoint::Scale { value: s1 },
                ParameterPoint::Scale { value: s2 },
            ) => {
                if s1 == s2 && s1.is_finite() {
                    // By continuity: two identical (possibly collapsed)
                    // scales have not moved apart.
                    return Ok(0.0);
                }
                if !(s1.is_finite() && s2.is_finite() && *s1 > 0.0 && *s2 > 0.0) {
                    return Ok(f64::INFINITY);
                }
                Ok((s1.ln() - s2.ln()).abs())
            }
            (
                ParamMetricKind::LogDet,
                ParameterPoint::Scatter { matrix: m1 },
                ParameterPoint::Scatter { matrix: m2 },
            ) => match (log_det_spd(m1), log_det_spd(m2)) {
                (Some(a), Some(b)) => Ok((a - b).abs()),
                _ => Ok(f64::INFINITY),
            },
            (
                ParamMetricKind::MichaelisMenten,
                ParameterPoint::MichaelisMenten { a: a1, c: c1 },
                ParameterPoint::MichaelisMenten { a: a2, c: c2 },
            ) => {
                let ok = |a: f64, c: f64| a.is_finite() && c.is_finite() && a > 0.0 && c >= 0.0;
                if !ok(*a1, *c1) || !ok(*a2, *c2) {
                    return Ok(f64::INFINITY);
                }
                Ok((a1 - a2).abs() + (1.0 / a1 - 1.0 / a2).abs() + (c1 - c2).abs())
            }
            _ => Err(Error::IncompatibleMetric {
                metric: self.label().into(),
                parameter: format!("{} vs {}", s.label(), t.label()),
            }),
        }
    }
}

impl Serialize for ParamMetricKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// ln det of a symmetric positive-definite matrix given by rows, or None if
/// the matrix is not usable (non-square, non-finite, eigenvalue <= 0).
fn log_det_spd(rows: &[Vec<f64>]) -> Option<f64> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return None;
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    if flat.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let m = DMatrix::from_row_slice(d, d, &flat);
    let sym = m.symmetric_eigen();
    let mut sum = 0.0;
    for &ev in sym.eigenvalues.iter() {
        if !(ev.is_finite() && ev > 0.0) {
            return None;
        }
        sum += ev.ln();
    }
    Some(sum)
}

/// How close to unity a determinant or ratio must be before an element is
/// treated as volume-preserving. Numerically orthogonal matrices produced by
/// QR have determinants within machine precision of +-1.
const UNIT_TOL: f64 = 1e-9;

/// One concrete transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    /// x -> x + shift on Euclidean points.
    Translation { shift: DVector<f64> },
    /// x -> mat * x + shift on Euclidean points; mat must be invertible.
    Affine {
        mat: DMatrix<f64>,
        shift: DVector<f64>,
    },
    /// (x, y) -> (x, y - x . adjust) on carrier/response pairs.
    RegressionCarrier { adjust: DVector<f64> },
    /// (x, y) -> (factor * x, y) on positive-carrier pairs; factor > 0.
    ScaleX { factor: f64 },
    /// (y, x) -> (y xor flip, mat * x + shift) on labeled points.
    BinaryResponseMap {
        flip: bool,
        mat: DMatrix<f64>,
        shift: DVector<f64>,
    },
}

impl GroupElement {
    pub fn translation(shift: Vec<f64>) -> Result<Self> {
        let v = finite_vector(shift, "translation shift")?;
        Ok(GroupElement::Translation { shift: v })
    }

    /// `mat` given by rows; must be square and invertible.
    pub fn affine(mat: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self> {
        let m = square_invertible(mat, "affine matrix")?;
        let v = finite_vector(shift, "affine shift")?;
        if m.nrows() != v.len() {
            return Err(Error::InvalidArgument {
                what: format!(
                    "affine matrix is {}x{} but shift has length {}",
                    m.nrows(),
                    m.ncols(),
                    v.len()
                ),
            });
        }
        Ok(GroupElement::Affine { mat: m, shift: v })
    }

    /// Univariate affine map x -> a x + b.
    pub fn scale_shift(a: f64, b: f64) -> Result<Self> {
        Self::affine(vec![vec![a]], vec![b])
    }

    pub fn regression_carrier(adjust: Vec<f64>) -> Result<Self> {
        let v = finite_vector(adjust, "carrier adjustment")?;
        Ok(GroupElement::RegressionCarrier { adjust: v })
    }

    pub fn scale_x(factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument {
                what: format!("carrier scale factor must be positive, got {factor}"),
            });
        }
        Ok(GroupElement::ScaleX { factor })
    }

    /// Relabel every response: 0 <-> 1, covariates untouched.
    pub fn label_flip(covariate_dim: usize) -> Self {
        GroupElement::BinaryResponseMap {
            flip: true,
            mat: DMatrix::identity(covariate_dim, covariate_dim),
            shift: DVector::zeros(covariate_dim),
        }
    }

    /// Invertible affine change of covariates, labels untouched.
    pub fn covariate_affine(mat: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self> {
        let m = square_invertible(mat, "covariate matrix")?;
        let v = finite_vector(shift, "covariate shift")?;
        if m.nrows() != v.len() {
            return Err(Error::InvalidArgument {
                what: format!(
                    "covariate matrix is {}x{} but shift has length {}",
                    m.nrows(),
                    m.ncols(),
                    v.len()
                ),
            });
        }
        Ok(GroupElement::BinaryResponseMap {
            flip: false,
            mat: m,
            shift: v,
        })
    }

    pub fn label(&self) -> String {
        match self {
            GroupElement::Translation { shift } => format!("translation(dim={})", shift.len()),
            GroupElement::Affine { mat, .. } => format!("affine(dim={})", mat.nrows()),
            GroupElement::RegressionCarrier { adjust } => {
                format!("carrier-shift(dim={})", adjust.len())
            }
            GroupElement::ScaleX { factor } => format!("scale-x({factor})"),
            GroupElement::BinaryResponseMap { flip, mat, .. } => {
                format!("binary-map(flip={flip}, dim={})", mat.nrows())
            }
        }
    }

    /// Condition number of the linear part; used to scale numeric tolerances.
    pub fn cond(&self) -> f64 {
        match self {
            GroupElement::Translation { .. } => 1.0,
            GroupElement::Affine { mat, .. } | GroupElement::BinaryResponseMap { mat, .. } => {
                let svd = mat.clone().svd(false, false);
                let max = svd.singular_values.max();
                let min = svd.singular_values.min();
                if min > 0.0 {
                    max / min
                } else {
                    f64::INFINITY
                }
            }
            GroupElement::RegressionCarrier { adjust } => 1.0 + adjust.norm(),
            GroupElement::ScaleX { factor } => factor.max(1.0 / factor),
        }
    }

    /// `self` after `other`: the element sending x to self(other(x)).
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        match (self, other) {
            (Translation { shift: b2 }, Translation { shift: b1 }) if b1.len() == b2.len() => {
                Ok(Translation { shift: b1 + b2 })
            }
            (Affine { .. } | Translation { .. }, Affine { .. } | Translation { .. }) => {
                let (a2, b2) = self.as_affine_parts()?;
                let (a1, b1) = other.as_affine_parts()?;
                if a1.nrows() != a2.nrows() {
                    return Err(Error::IncompatibleComposition {
                        left: self.label(),
                        right: other.label(),
                    });
                }
                Ok(Affine {
                    mat: &a2 * &a1,
                    shift: &a2 * b1 + b2,
                })
            }
            (RegressionCarrier { adjust: a2 }, RegressionCarrier { adjust: a1 })
                if a1.len() == a2.len() =>
            {
                Ok(RegressionCarrier { adjust: a1 + a2 })
            }
            (ScaleX { factor: f2 }, ScaleX { factor: f1 }) => Ok(ScaleX { factor: f1 * f2 }),
            (
                BinaryResponseMap {
                    flip: f2,
                    mat: a2,
                    shift: b2,
                },
                BinaryResponseMap {
                    flip: f1,
                    mat: a1,
                    shift: b1,
                },
            ) if a1.nrows() == a2.nrows() => Ok(BinaryResponseMap {
                flip: f1 ^ f2,
                mat: a2 * a1,
                shift: a2 * b1 + b2,
            }),
            _ => Err(Error::IncompatibleComposition {
                left: self.label(),
                right: other.label(),
            }),
        }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        use GroupElement::*;
        match self {
            Translation { shift } => Ok(Translation { shift: -shift }),
            Affine { mat, shift } => {
                let inv = invert(mat, "affine matrix")?;
                let neg = -(&inv * shift);
                Ok(Affine {
                    mat: inv,
                    shift: neg,
                })
            }
            RegressionCarrier { adjust } => Ok(RegressionCarrier { adjust: -adjust }),
            ScaleX { factor } => Ok(ScaleX {
                factor: 1.0 / factor,
            }),
            BinaryResponseMap { flip, mat, shift } => {
                let inv = invert(mat, "covariate matrix")?;
                let neg = -(&inv * shift);
                Ok(BinaryResponseMap {
                    flip: *flip,
                    mat: inv,
                    shift: neg,
                })
            }
        }
    }

    fn as_affine_parts(&self) -> Result<(DMatrix<f64>, DVector<f64>)> {
        match self {
            GroupElement::Translation { shift } => {
                Ok((DMatrix::identity(shift.len(), shift.len()), shift.clone()))
            }
            GroupElement::Affine { mat, shift } => Ok((mat.clone(), shift.clone())),
            _ => Err(Error::IncompatibleComposition {
                left: self.label(),
                right: "affine form".into(),
            }),
        }
    }

    /// Transform a single point of the given sample space.
    pub fn act_point(&self, kind: SampleSpaceKind, p: &[f64]) -> Result<Point> {
        use GroupElement::*;
        match (self, kind) {
            (Translation { shift }, SampleSpaceKind::Euclidean { dim }) if dim == shift.len() => {
                Ok(p.iter().zip(shift.iter()).map(|(x, b)| x + b).collect())
            }
            (Affine { mat, shift }, SampleSpaceKind::Euclidean { dim }) if dim == mat.nrows() => {
                let x = DVector::from_column_slice(p);
                Ok((mat * x + shift).as_slice().to_vec())
            }
            (RegressionCarrier { adjust }, SampleSpaceKind::RegressionPair { carrier_dim })
                if carrier_dim == adjust.len() =>
            {
                let dot: f64 = p[..carrier_dim]
                    .iter()
                    .zip(adjust.iter())
                    .map(|(x, a)| x * a)
                    .sum();
                let mut q = p.to_vec();
                q[carrier_dim] -= dot;
                Ok(q)
            }
            (ScaleX { factor }, SampleSpaceKind::PositiveCarrier) => Ok(vec![factor * p[0], p[1]]),
            (
                BinaryResponseMap { flip, mat, shift },
                SampleSpaceKind::BinaryResponse { covariate_dim },
            ) if covariate_dim == mat.nrows() => {
                let x = DVector::from_column_slice(&p[1..]);
                let moved = mat * x + shift;
                let y = if *flip { 1.0 - p[0] } else { p[0] };
                let mut q = vec![y];
                q.extend(moved.as_slice());
                Ok(q)
            }
            _ => Err(Error::IncompatibleAction {
                group: self.label(),
                target: kind.label(),
            }),
        }
    }

    /// Transform every point of a sample; weights are untouched.
    pub fn act_sample(&self, p: &EmpiricalMeasure) -> Result<EmpiricalMeasure> {
        let points = p
            .points()
            .iter()
            .map(|pt| self.act_point(p.kind(), pt))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalMeasure::new(points, p.weights().to_vec(), p.kind())
    }

    /// The induced map `h_g` on parameters.
    pub fn act_parameter(&self, t: &ParameterPoint) -> Result<ParameterPoint> {
        use GroupElement::*;
        match (self, t) {
            (Translation { shift }, ParameterPoint::Location { coords })
                if coords.len() == shift.len() =>
            {
                Ok(ParameterPoint::Location {
                    coords: coords
                        .iter()
                        .zip(shift.iter())
                        .map(|(x, b)| x + b)
                        .collect(),
                })
            }
            (Affine { mat, shift }, ParameterPoint::Location { coords })
                if coords.len() == mat.nrows() =>
            {
                let x = DVector::from_column_slice(coords);
                Ok(ParameterPoint::Location {
                    coords: (mat * x + shift).as_slice().to_vec(),
                })
            }
            // Translations leave dispersion parameters unchanged.
            (Translation { shift }, ParameterPoint::Scale { .. }) if shift.len() == 1 => {
                Ok(t.clone())
            }
            (Translation { shift }, ParameterPoint::Scatter { matrix })
                if shift.len() == matrix.len() =>
            {
                Ok(t.clone())
            }
            (Affine { mat, .. }, ParameterPoint::Scale { value }) if mat.nrows() == 1 => {
                Ok(ParameterPoint::Scale {
                    value: mat[(0, 0)].abs() * value,
                })
            }
            (Affine { mat, .. }, ParameterPoint::Scatter { matrix })
                if matrix.len() == mat.nrows() =>
            {
                let d = matrix.len();
                let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
                let s = DMatrix::from_row_slice(d, d, &flat);
                let moved = mat * s * mat.transpose();
                Ok(ParameterPoint::Scatter {
                    matrix: (0..d)
                        .map(|i| (0..d).map(|j| moved[(i, j)]).collect())
                        .collect(),
                })
            }
            (RegressionCarrier { adjust }, ParameterPoint::Slope { coeffs })
                if coeffs.len() == adjust.len() =>
            {
                Ok(ParameterPoint::Slope {
                    coeffs: coeffs
                        .iter()
                        .zip(adjust.iter())
                        .map(|(b, a)| b - a)
                        .collect(),
                })
            }
            (ScaleX { factor }, ParameterPoint::MichaelisMenten { a, c }) => {
                let root = factor.sqrt();
                Ok(ParameterPoint::MichaelisMenten {
                    a: a / root,
                    c: c / root,
                })
            }
            (
                BinaryResponseMap { flip, mat, shift },
                ParameterPoint::LogisticTheta { intercept, slope },
            ) if slope.len() == mat.nrows() => {
                let theta = DVector::from_column_slice(slope);
                let moved =
                    mat.transpose()
                        .lu()
                        .solve(&theta)
                        .ok_or_else(|| Error::SingularMatrix {
                            what: "covariate matrix transpose".into(),
                        })?;
                let sign = if *flip { -1.0 } else { 1.0 };
                Ok(ParameterPoint::LogisticTheta {
                    intercept: sign * (intercept - shift.dot(&moved)),
                    slope: moved.iter().map(|v| sign * v).collect(),
                })
            }
            _ => Err(Error::IncompatibleAction {
                group: self.label(),
                target: t.label().into(),
            }),
        }
    }

    /// Whether iterating this element drives every parameter value to
    /// infinity under the given metric. See the module notes for the
    /// deliberate conservatism on affine elements with the Euclidean metric.
    pub fn is_breaking(&self, metric: ParamMetricKind) -> bool {
        use GroupElement::*;
        match (self, metric) {
            (Translation { shift }, ParamMetricKind::Euclidean) => shift.norm() > 0.0,
            (Affine { mat, .. }, ParamMetricKind::LogDet) => {
                (mat.determinant().abs().ln()).abs() > UNIT_TOL
            }
            (Affine { mat, .. }, ParamMetricKind::ScaleLog) if mat.nrows() == 1 => {
                mat[(0, 0)].abs().ln().abs() > UNIT_TOL
            }
            (RegressionCarrier { adjust }, ParamMetricKind::Euclidean) => adjust.norm() > 0.0,
            (ScaleX { factor }, ParamMetricKind::MichaelisMenten) => factor.ln().abs() > UNIT_TOL,
            _ => false,
        }
    }
}

fn finite_vector(v: Vec<f64>, what: &str) -> Result<DVector<f64>> {
    if v.is_empty() {
        return Err(Error::InvalidArgument {
            what: format!("{what} must not be empty"),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            context: what.into(),
        });
    }
    Ok(DVector::from_vec(v))
}

fn square_invertible(rows: Vec<Vec<f64>>, what: &str) -> Result<DMatrix<f64>> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidArgument {
            what: format!("{what} must be square and nonempty"),
        });
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    if flat.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: what.into(),
        });
    }
    let m = DMatrix::from_row_slice(d, d, &flat);
    let det = m.determinant();
    if !(det.is_finite() && det != 0.0) {
        return Err(Error::SingularMatrix { what: what.into() });
    }
    Ok(m)
}

fn invert(mat: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    mat.clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix { what: what.into() })
}

/// A named family of transformations, used to declare what an estimator is
/// equivariant under and to draw random elements for checking that claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFamily {
    /// All translations of R^dim.
    Translation { dim: usize },
    /// All invertible affine maps of R^dim.
    Affine { dim: usize },
    /// Orthogonal linear maps of R^dim (rotations and reflections, no shift).
    Orthogonal { dim: usize },
    /// Carrier-linear response shifts (x, y) -> (x, y - x . a).
    RegressionCarrier { carrier_dim: usize },
    /// Positive rescalings of the carrier axis.
    ScaleX,
    /// Label flips combined with invertible affine covariate changes.
    BinaryResponse { covariate_dim: usize },
}

impl GroupFamily {
    pub fn label(&self) -> String {
        match *self {
            GroupFamily::Translation { dim } => format!("translation:{dim}"),
            GroupFamily::Affine { dim } => format!("affine:{dim}"),
            GroupFamily::Orthogonal { dim } => format!("orthogonal:{dim}"),
            GroupFamily::RegressionCarrier { carrier_dim } => format!("carrier:{carrier_dim}"),
            GroupFamily::ScaleX => "scale-x".into(),
            GroupFamily::BinaryResponse { covariate_dim } => format!("binary:{covariate_dim}"),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        let dim = || -> Result<usize> {
            arg.ok_or_else(|| Error::UnknownName {
                what: "group family (missing dimension)".into(),
                name: name.into(),
            })?
            .parse::<usize>()
            .map_err(|_| Error::UnknownName {
                what: "group family dimension".into(),
                name: name.into(),
            })
        };
        match head {
            "translation" => Ok(GroupFamily::Translation { dim: dim()? }),
            "affine" => Ok(GroupFamily::Affine { dim: dim()? }),
            "orthogonal" => Ok(GroupFamily::Orthogonal { dim: dim()? }),
            "carrier" => Ok(GroupFamily::RegressionCarrier {
                carrier_dim: dim()?,
            }),
            "scale-x" => Ok(GroupFamily::ScaleX),
            "binary" => Ok(GroupFamily::BinaryResponse {
                covariate_dim: dim()?,
            }),
            _ => Err(Error::UnknownName {
                what: "group family".into(),
                name: name.into(),
            }),
        }
    }

    /// The sample space this family acts on.
    pub fn compatible_kind(&self, kind: SampleSpaceKind) -> bool {
        match (*self, kind) {
            (GroupFamily::Translation { dim }, SampleSpaceKind::Euclidean { dim: d }) => dim == d,
            (GroupFamily::Affine { dim }, SampleSpaceKind::Euclidean { dim: d }) => dim == d,
            (GroupFamily::Orthogonal { dim }, SampleSpaceKind::Euclidean { dim: d }) => dim == d,
            (
                GroupFamily::RegressionCarrier { carrier_dim },
                SampleSpaceKind::RegressionPair { carrier_dim: d },
            ) => carrier_dim == d,
            (GroupFamily::ScaleX, SampleSpaceKind::PositiveCarrier) => true,
            (
                GroupFamily::BinaryResponse { covariate_dim },
                SampleSpaceKind::BinaryResponse { covariate_dim: d },
            ) => covariate_dim == d,
            _ => false,
        }
    }

    /// Whether the family contains any element that is breaking for the
    /// given parameter metric. When this is false the degeneracy bound on
    /// breakdown does not apply and the bound machinery must refuse.
    pub fn contains_breaking(&self, metric: ParamMetricKind) -> bool {
        match (*self, metric) {
            (GroupFamily::Translation { .. }, ParamMetricKind::Euclidean) => true,
            (GroupFamily::Affine { .. }, ParamMetricKind::LogDet) => true,
            (GroupFamily::Affine { dim: 1 }, ParamMetricKind::ScaleLog) => true,
            (GroupFamily::RegressionCarrier { .. }, ParamMetricKind::Euclidean) => true,
            (GroupFamily::ScaleX, ParamMetricKind::MichaelisMenten) => true,
            _ => false,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupFamily::Translation { dim } => GroupElement::Translation {
                shift: DVector::zeros(dim),
            },
            GroupFamily::Affine { dim } | GroupFamily::Orthogonal { dim } => GroupElement::Affine {
                mat: DMatrix::identity(dim, dim),
                shift: DVector::zeros(dim),
            },
            GroupFamily::RegressionCarrier { carrier_dim } => GroupElement::RegressionCarrier {
                adjust: DVector::zeros(carrier_dim),
            },
            GroupFamily::ScaleX => GroupElement::ScaleX { factor: 1.0 },
            GroupFamily::BinaryResponse { covariate_dim } => GroupElement::BinaryResponseMap {
                flip: false,
                mat: DMatrix::identity(covariate_dim, covariate_dim),
                shift: DVector::zeros(covariate_dim),
            },
        }
    }

    /// Draw a moderately conditioned random element, with any shift scaled
    /// to the spread of the data it will act on.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, spread: f64) -> GroupElement {
        let s = if spread.is_finite() && spread > 0.0 {
            spread
        } else {
            1.0
        };
        match *self {
            GroupFamily::Translation { dim } => GroupElement::Translation {
                shift: random_shift(rng, dim, s),
            },
            GroupFamily::Affine { dim } => GroupElement::Affine {
                mat: random_well_conditioned(rng, dim),
                shift: random_shift(rng, dim, s),
            },
            GroupFamily::Orthogonal { dim } => GroupElement::Affine {
                mat: random_orthogonal(rng, dim),
                shift: DVector::zeros(dim),
            },
            GroupFamily::RegressionCarrier { carrier_dim } => GroupElement::RegressionCarrier {
                adjust: random_shift(rng, carrier_dim, s),
            },
            GroupFamily::ScaleX => GroupElement::ScaleX {
                factor: (rng.random_range(-1.5..1.5f64)).exp(),
            },
            GroupFamily::BinaryResponse { covariate_dim } => GroupElement::BinaryResponseMap {
                flip: rng.random_range(0..2) == 1,
                mat: random_well_conditioned(rng, covariate_dim),
                shift: random_shift(rng, covariate_dim, s),
            },
        }
    }
}

impl Serialize for GroupFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

/// Components drawn away from zero, in [s/4, s] with random signs.
fn random_shift<R: Rng + ?Sized>(rng: &mut R, dim: usize, s: f64) -> DVector<f64> {
    DVector::from_iterator(
        dim,
        (0..dim).map(|_| {
            let mag = rng.random_range(0.25..1.0f64) * s;
            if rng.random_range(0..2) == 1 {
                mag
            } else {
                -mag
            }
        }),
    )
}

fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |_, _| rng.sample(StandardNormal))
}

/// Haar-like random orthogonal matrix: QR of a Gaussian matrix with the signs
/// fixed so the factorization is unique.
fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let qr = random_gaussian(rng, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            for i in 0..dim {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Q1 * D * Q2 with orthogonal factors and singular values in [e^-0.7, e^0.7],
/// so the condition number never exceeds e^1.4 (about 4).
fn random_well_conditioned<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let q1 = random_orthogonal(rng, dim);
    let q2 = random_orthogonal(rng, dim);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|_| rng.random_range(-0.7..0.7f64).exp()),
    ));
    q1 * d * q2
}
