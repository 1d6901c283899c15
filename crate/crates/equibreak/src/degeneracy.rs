//! Degenerate-mass quantities and the breakdown bounds they imply.
//!
//! For each group family, certain subsets of the sample space are held fixed
//! by some norm-diverging ("breaking") group element; concentrating
//! probability mass on such a set is what lets an equivariant estimator
//! survive contamination. The quantity Δ(P) — the largest mass P assigns to
//! any such fixed set — therefore caps how robust an equivariant estimator
//! can be: the replacement breakdown point of any estimator equivariant
//! under a family with breaking elements is at most
//! `floor((n − nΔ + 1)/2) / n`, and the population version is at most
//! `(1 − Δ)/2`.
//!
//! The fixed sets are family-specific and hard-coded here:
//! * translations move every point, so Δ = 0 always;
//! * affine maps fix proper affine subspaces, so Δ is the largest mass on a
//!   point, line, or plane (exact enumeration up to dimension 3);
//! * carrier shears `(x, y) → (x, y − xᵗa)` fix `{x : xᵗa = 0}`, so Δ is the
//!   largest mass whose carriers lie on a hyperplane through the origin;
//! * positive rescalings of a positive carrier fix nothing, so Δ = 0.
//!
//! The remaining families (orthogonal maps, binary-response relabelings)
//! contain no breaking elements at all — no bound exists and [`bound_for`]
//! says so explicitly rather than inventing one.

use crate::error::{Error, Result};
use crate::group::GroupFamily;
use crate::measure::{lower_weighted_median, EmpiricalMeasure, Point, SampleSpaceKind};
use serde::Serialize;

/// Membership tolerance for "lies on the subspace", relative to the sample's
/// coordinate spread.
pub const SUBSPACE_TOL_FACTOR: f64 = 1e-10;

/// The set realizing a degenerate-mass value, stored so the value can be
/// recomputed from the sample alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DeltaWitness {
    /// No fixed set carries mass (translation and positive-rescaling
    /// families).
    Empty,
    /// A single point of maximal mass.
    Point { point: Point },
    /// The affine subspace {x : nᵢᵗx = cᵢ for every i}, as unit normals and
    /// offsets in full point coordinates (response coordinates get zero
    /// normal components, so a carrier-space hyperplane reads naturally).
    Subspace {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    /// The heaviest single point inside [median − λ, median + λ].
    IntervalPoint { point: f64, lambda: f64 },
}

impl DeltaWitness {
    /// Total mass the sample puts on the witness set. `tol` is the absolute
    /// distance tolerance used for subspace membership.
    pub fn mass_in(&self, p: &EmpiricalMeasure, tol: f64) -> f64 {
        match self {
            DeltaWitness::Empty => 0.0,
            DeltaWitness::Point { point } => p.mass_at(point),
            DeltaWitness::Subspace { normals, offsets } => p
                .merged_support()
                .iter()
                .filter(|(x, _)| {
                    normals.iter().zip(offsets).all(|(n, c)| {
                        let v: f64 = n.iter().zip(x).map(|(a, b)| a * b).sum();
                        (v - c).abs() <= tol
                    })
                })
                .map(|(_, w)| w)
                .sum(),
            DeltaWitness::IntervalPoint { point, .. } => p.mass_at(&[*point]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaResult {
    pub value: f64,
    pub witness: DeltaWitness,
}

/// Largest point mass never matters for translations: every non-identity
/// translation moves every point, so no fixed set exists and Δ(P) = 0.
pub fn delta_translation(p: &EmpiricalMeasure) -> Result<DeltaResult> {
    match p.kind() {
        SampleSpaceKind::Euclidean { .. } => Ok(DeltaResult {
            value: 0.0,
            witness: DeltaWitness::Empty,
        }),
        other => Err(Error::KindMismatch {
            expected: "euclidean sample".into(),
            got: other.label(),
        }),
    }
}

/// Largest mass on a proper affine subspace of ℝᵏ (a point for k = 1; a
/// point or line for k = 2; up to a plane for k = 3), found by exhaustive
/// enumeration of the subspaces spanned by support-point subsets of size
/// ≤ k. Exact enumeration is refused above dimension 3.
pub fn delta_affine(p: &EmpiricalMeasure, k: usize) -> Result<DeltaResult> {
    let dim = match p.kind() {
        SampleSpaceKind::Euclidean { dim } => dim,
        other => {
            return Err(Error::KindMismatch {
                expected: "euclidean sample".into(),
                got: other.label(),
            })
        }
    };
    if k != dim {
        return Err(Error::InvalidArgument {
            what: format!("affine dimension {k} does not match sample dimension {dim}"),
        });
    }
    if k > 3 {
        return Err(Error::DimensionTooHigh { dim: k, max: 3 });
    }

    let support = p.merged_support();
    let spread = p.coordinate_spread();
    if spread == 0.0 {
        // One support point: it is itself a degenerate affine subspace.
        return Ok(DeltaResult {
            value: 1.0,
            witness: DeltaWitness::Point {
                point: support[0].0.clone(),
            },
        });
    }
    let tol = SUBSPACE_TOL_FACTOR * spread;

    if k == 1 {
        let mut best = (f64::NEG_INFINITY, DeltaWitness::Empty);
        for (pt, w) in &support {
            if *w > best.0 {
                best = (*w, DeltaWitness::Point { point: pt.clone() });
            }
        }
        return Ok(DeltaResult {
            value: best.0,
            witness: best.1,
        });
    }

    let m = support.len();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_witness = DeltaWitness::Empty;
    let mut consider = |subset: &[usize]| {
        let base = &support[subset[0]].0;
        let dirs: Vec<Vec<f64>> = subset[1..]
            .iter()
            .map(|&j| {
                support[j]
                    .0
                    .iter()
                    .zip(base)
                    .map(|(a, b)| a - b)
                    .collect::<Vec<f64>>()
            })
            .collect();
        let basis = orthonormalize(&dirs, tol);
        let mass: f64 = support
            .iter()
            .filter(|(x, _)| subspace_residual(x, base, &basis) <= tol)
            .map(|(_, w)| w)
            .sum();
        if mass > best_value + 1e-15 {
            let normals = orthogonal_complement(&basis, k);
            let offsets = normals
                .iter()
                .map(|n| n.iter().zip(base).map(|(a, b)| a * b).sum())
                .collect();
            best_value = mass;
            best_witness = DeltaWitness::Subspace { normals, offsets };
        }
    };

    // Subsets of size 2..=k in lexicographic order; their affine hulls have
    // dimension ≤ k − 1 and cover every candidate subspace (a maximal-mass
    // subspace can always be rotated onto the affine hull of the support
    // points it contains without shedding mass).
    for i in 0..m {
        for j in (i + 1)..m {
            consider(&[i, j]);
            if k == 3 {
                for l in (j + 1)..m {
                    consider(&[i, j, l]);
                }
            }
        }
    }
    if m == 1 {
        // Spread > 0 is impossible with one support point, but stay total.
        return Ok(DeltaResult {
            value: 1.0,
            witness: DeltaWitness::Point {
                point: support[0].0.clone(),
            },
        });
    }
    Ok(DeltaResult {
        value: best_value,
        witness: best_witness,
    })
}

/// Largest mass whose carrier coordinates lie on a hyperplane through the
/// origin — the fixed set of a carrier shear. Exact for carrier dimension
/// ≤ 3.
pub fn delta_regression_carrier(p: &EmpiricalMeasure) -> Result<DeltaResult> {
    let k = match p.kind() {
        SampleSpaceKind::RegressionPair { carrier_dim } => carrier_dim,
        other => {
            return Err(Error::KindMismatch {
                expected: "regression sample".into(),
                got: other.label(),
            })
        }
    };
    if k > 3 {
        return Err(Error::DimensionTooHigh { dim: k, max: 3 });
    }
    let support = p.merged_support();
    let carriers: Vec<Vec<f64>> = support.iter().map(|(x, _)| x[..k].to_vec()).collect();
    let spread = carriers
        .iter()
        .flat_map(|c| c.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let tol = SUBSPACE_TOL_FACTOR * (spread.1 - spread.0).max(f64::MIN_POSITIVE);

    // Witness normals live in full point coordinates: zero over the
    // response coordinate.
    let pad = |n: Vec<f64>| -> Vec<f64> {
        let mut v = n;
        v.resize(k + 1, 0.0);
        v
    };
    let mass_on = |normal: &[f64]| -> f64 {
        carriers
            .iter()
            .zip(&support)
            .filter(|(c, _)| {
                let v: f64 = normal.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                v.abs() <= tol
            })
            .map(|(_, (_, w))| w)
            .sum()
    };

    let nonzero: Vec<&Vec<f64>> = carriers
        .iter()
        .filter(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt() > tol)
        .collect();

    let (value, normal) = match k {
        1 => (mass_on(&[1.0]), vec![1.0]),
        2 => {
            if nonzero.is_empty() {
                (1.0, vec![1.0, 0.0])
            } else {
                let mut best = (f64::NEG_INFINITY, vec![0.0; 2]);
                for c in &nonzero {
                    let len = (c[0] * c[0] + c[1] * c[1]).sqrt();
                    let n = vec![-c[1] / len, c[0] / len];
                    let mass = mass_on(&n);
                    if mass > best.0 + 1e-15 {
                        best = (mass, n);
                    }
                }
                best
            }
        }
        3 => {
            // Rank of the nonzero carriers decides whether one plane holds
            // everything.
            let mut best = (f64::NEG_INFINITY, vec![0.0; 3]);
            let mut any_pair = false;
            for i in 0..nonzero.len() {
                for j in (i + 1)..nonzero.len() {
                    let a = nonzero[i];
                    let b = nonzero[j];
                    let cx = a[1] * b[2] - a[2] * b[1];
                    let cy = a[2] * b[0] - a[0] * b[2];
                    let cz = a[0] * b[1] - a[1] * b[0];
                    let len = (cx * cx + cy * cy + cz * cz).sqrt();
                    if len <= tol {
                        continue; // collinear pair spans no unique plane
                    }
                    any_pair = true;
                    let n = vec![cx / len, cy / len, cz / len];
                    let mass = mass_on(&n);
                    if mass > best.0 + 1e-15 {
                        best = (mass, n);
                    }
                }
            }
            if !any_pair {
                // All carriers lie on a single line through the origin (or
                // at the origin itself); some plane contains them all.
                let n = match nonzero.first() {
                    Some(c) => {
                        let basis = orthonormalize(&[c.to_vec()], tol);
                        orthogonal_complement(&basis, 3)[0].clone()
                    }
                    None => vec![1.0, 0.0, 0.0],
                };
                (1.0, n)
            } else {
                best
            }
        }
        _ => unreachable!("carrier dimension checked above"),
    };
    Ok(DeltaResult {
        value,
        witness: DeltaWitness::Subspace {
            normals: vec![pad(normal)],
            offsets: vec![0.0],
        },
    })
}

/// Largest single-point mass inside the closed interval
/// [median − λ, median + λ].
pub fn delta_interval(p: &EmpiricalMeasure, lambda: f64) -> Result<f64> {
    Ok(delta_interval_result(p, lambda)?.value)
}

/// As [`delta_interval`], with the maximizing point recorded.
pub fn delta_interval_result(p: &EmpiricalMeasure, lambda: f64) -> Result<DeltaResult> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument {
            what: format!("interval half-width must be nonnegative, got {lambda}"),
        });
    }
    let mut values = p.scalars()?;
    let med = lower_weighted_median(&mut values);
    let mut best: Option<(f64, f64)> = None;
    for (x, w) in p
        .merged_support()
        .into_iter()
        .map(|(pt, w)| (pt[0], w))
        .filter(|(x, _)| (x - med).abs() <= lambda)
    {
        if best.map_or(true, |(bw, _)| w > bw + 1e-15) {
            best = Some((w, x));
        }
    }
    let (value, point) = best.expect("the median itself always lies in the interval");
    Ok(DeltaResult {
        value,
        witness: DeltaWitness::IntervalPoint { point, lambda },
    })
}

/// Degenerate mass for a declared group family. Families without a known
/// fixed-set characterization are refused rather than guessed.
pub fn delta_for_family(p: &EmpiricalMeasure, family: &GroupFamily) -> Result<DeltaResult> {
    match family {
        GroupFamily::Translation { .. } => delta_translation(p),
        GroupFamily::Affine { dim } => delta_affine(p, *dim),
        GroupFamily::RegressionCarrier { .. } => delta_regression_carrier(p),
        GroupFamily::ScaleX => match p.kind() {
            // A nontrivial rescaling of a positive carrier fixes no point.
            SampleSpaceKind::PositiveCarrier => Ok(DeltaResult {
                value: 0.0,
                witness: DeltaWitness::Empty,
            }),
            other => Err(Error::KindMismatch {
                expected: "positive-carrier sample".into(),
                got: other.label(),
            }),
        },
        GroupFamily::Orthogonal { .. } | GroupFamily::BinaryResponse { .. } => {
            Err(Error::UnknownGroupDelta {
                family: family.label(),
            })
        }
    }
}

/// Breakdown bounds, or the explicit statement that none exist.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundOutcome {
    Bounds {
        /// Cap on the gross-error breakdown point of any equivariant
        /// functional: (1 − Δ)/2.
        population_bound: f64,
        /// Cap on the replacement breakdown fraction:
        /// floor((n − nΔ + 1)/2)/n.
        fsbp_bound: f64,
        fsbp_numerator: u64,
        n: usize,
    },
    /// The family has no breaking elements, so equivariance forces no bound.
    NoBreakingElements,
}

impl BoundOutcome {
    pub fn describe(&self) -> String {
        match self {
            BoundOutcome::Bounds {
                fsbp_numerator, n, ..
            } => format!("{fsbp_numerator}/{n}"),
            BoundOutcome::NoBreakingElements => "no bound: group has no breaking elements".into(),
        }
    }

    pub fn fsbp_bound(&self) -> Option<f64> {
        match self {
            BoundOutcome::Bounds { fsbp_bound, .. } => Some(*fsbp_bound),
            BoundOutcome::NoBreakingElements => None,
        }
    }
}

/// The two breakdown caps implied by a degenerate mass Δ for a sample of
/// size n, provided the group family actually contains breaking elements.
/// The product nΔ is snapped to the nearest integer when within 1e-9, so
/// rational masses computed in floating point land on the intended step.
pub fn theorem_bounds(n: usize, delta: f64, group_breaking: bool) -> Result<BoundOutcome> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(0.0..=1.0).contains(&delta) || !delta.is_finite() {
        return Err(Error::DeltaRange { value: delta });
    }
    if !group_breaking {
        return Ok(BoundOutcome::NoBreakingElements);
    }
    let nf = n as f64;
    let mut m = nf * delta;
    if (m - m.round()).abs() < 1e-9 {
        m = m.round();
    }
    let k = ((nf - m + 1.0) / 2.0).floor().max(0.0);
    Ok(BoundOutcome::Bounds {
        population_bound: (1.0 - delta) / 2.0,
        fsbp_bound: k / nf,
        fsbp_numerator: k as u64,
        n,
    })
}

/// Bounds for a sample under a declared family whose breakdown is measured
/// in `metric`: computes the degenerate mass and applies [`theorem_bounds`],
/// refusing cleanly when the family has no breaking elements for that
/// metric.
pub fn bound_for(
    p: &EmpiricalMeasure,
    family: &GroupFamily,
    metric: crate::group::ParamMetricKind,
) -> Result<(DeltaResult, BoundOutcome)> {
    if !family.contains_breaking(metric) {
        return Ok((
            DeltaResult {
                value: 0.0,
                witness: DeltaWitness::Empty,
            },
            BoundOutcome::NoBreakingElements,
        ));
    }
    let delta = delta_for_family(p, family)?;
    let bound = theorem_bounds(p.len(), delta.value, true)?;
    Ok((delta, bound))
}

fn subspace_residual(x: &[f64], base: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut r: Vec<f64> = x.iter().zip(base).map(|(a, b)| a - b).collect();
    for b in basis {
        let c: f64 = r.iter().zip(b).map(|(a, v)| a * v).sum();
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri -= c * bi;
        }
    }
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Modified Gram–Schmidt, dropping directions whose residual norm is ≤ tol.
fn orthonormalize(dirs: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for d in dirs {
        let mut v = d.clone();
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(a, x)| a * x).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > tol {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            basis.push(v);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `basis` in ℝ^dim.
fn orthogonal_complement(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut full = basis.to_vec();
    let mut complement = Vec::new();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        for b in &full {
            let c: f64 = e.iter().zip(b).map(|(a, x)| a * x).sum();
            for (ei, bi) in e.iter_mut().zip(b) {
                *ei -= c * bi;
            }
        }
        let n = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            for ei in e.iter_mut() {
                *ei /= n;
            }
            full.push(e.clone());
            complement.push(e);
        }
    }
    complement
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn uni(values: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::univariate(values).unwrap()
    }

    fn planar(points: &[[f64; 2]]) -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(
            points.iter().map(|p| p.to_vec()).collect(),
            SampleSpaceKind::Euclidean { dim: 2 },
        )
        .unwrap()
    }

    #[test]
    fn translation_mass_is_always_zero() {
        for p in [
            uni(&[0.0]),
            uni(&[0.0, 0.0, 1.0]),
            planar(&[[1.0, 2.0], [1.0, 2.0], [3.0, 4.0]]),
        ] {
            let d = delta_translation(&p).unwrap();
            assert_eq!(d.value, 0.0);
            assert_eq!(d.witness, DeltaWitness::Empty);
        }
    }

    #[test]
    fn affine_mass_univariate_counts_ties() {
        let d = delta_affine(&uni(&[0.0, 0.0, 0.0, 1.0, 2.0]), 1).unwrap();
        assert!((d.value - 0.6).abs() < 1e-12);
        assert_eq!(d.witness, DeltaWitness::Point { point: vec![0.0] });
        let d = delta_affine(&uni(&[4.0, -1.0, 7.0]), 1).unwrap();
        assert!((d.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn affine_mass_planar_prefers_lines() {
        // Three non-collinear equal masses: best proper subspace is the
        // line through any two of them.
        let s3 = 3.0f64.sqrt();
        let p = planar(&[[0.0, 1.0], [0.0, -1.0], [3.0 * s3, 0.0]]);
        let d = delta_affine(&p, 2).unwrap();
        assert!((d.value - 2.0 / 3.0).abs() < 1e-12, "{}", d.value);
        match &d.witness {
            DeltaWitness::Subspace { normals, offsets } => {
                assert_eq!(normals.len(), 1);
                assert_eq!(offsets.len(), 1);
            }
            other => panic!("expected a line witness, got {other:?}"),
        }
        // Four points, three collinear.
        let p = planar(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [5.0, 0.0]]);
        let d = delta_affine(&p, 2).unwrap();
        assert!((d.value - 0.75).abs() < 1e-12);
    }

    #[test]
    fn affine_mass_spatial_prefers_planes() {
        let mut pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        pts.push(vec![0.3, 0.4, 5.0]);
        let p = EmpiricalMeasure::from_points(pts, SampleSpaceKind::Euclidean { dim: 3 }).unwrap();
        let d = delta_affine(&p, 3).unwrap();
        assert!((d.value - 0.8).abs() < 1e-12, "{}", d.value);
    }

    #[test]
    fn affine_mass_rejects_high_dimensions_and_mismatches() {
        let p = EmpiricalMeasure::from_points(
            vec![vec![0.0; 4], vec![1.0; 4]],
            SampleSpaceKind::Euclidean { dim: 4 },
        )
        .unwrap();
        assert!(matches!(
            delta_affine(&p, 4),
            Err(Error::DimensionTooHigh { .. })
        ));
        assert!(delta_affine(&uni(&[1.0, 2.0]), 2).is_err());
    }

    #[test]
    fn affine_mass_is_affine_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let p = planar(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [5.0, 0.0], [5.0, 0.0]]);
        let base = delta_affine(&p, 2).unwrap().value;
        let family = GroupFamily::Affine { dim: 2 };
        for _ in 0..5 {
            let g = family.random_element(&mut rng, 3.0);
            let moved = g.act_sample(&p).unwrap();
            let d = delta_affine(&moved, 2).unwrap().value;
            assert!((d - base).abs() < 1e-9, "{d} vs {base}");
        }
    }

    #[test]
    fn affine_witness_mass_matches_value() {
        for (p, k) in [
            (uni(&[0.0, 0.0, 0.0, 1.0, 2.0]), 1usize),
            (planar(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [5.0, 0.0]]), 2),
        ] {
            let d = delta_affine(&p, k).unwrap();
            let tol = SUBSPACE_TOL_FACTOR * p.coordinate_spread();
            assert!((d.witness.mass_in(&p, tol) - d.value).abs() < 1e-12);
        }
    }

    #[test]
    fn carrier_mass_counts_hyperplanes_through_origin() {
        let kind1 = SampleSpaceKind::RegressionPair { carrier_dim: 1 };
        let p = EmpiricalMeasure::from_points(
            vec![vec![0.0, 1.0], vec![0.0, -2.0], vec![1.0, 3.0]],
            kind1,
        )
        .unwrap();
        let d = delta_regression_carrier(&p).unwrap();
        assert!((d.value - 2.0 / 3.0).abs() < 1e-12);

        let kind2 = SampleSpaceKind::RegressionPair { carrier_dim: 2 };
        let p = EmpiricalMeasure::from_points(
            vec![
                vec![1.0, 0.0, 5.0],
                vec![2.0, 0.0, 1.0],
                vec![0.0, 1.0, 2.0],
            ],
            kind2,
        )
        .unwrap();
        let d = delta_regression_carrier(&p).unwrap();
        assert!((d.value - 2.0 / 3.0).abs() < 1e-12, "{}", d.value);
        let tol = 1e-9;
        assert!((d.witness.mass_in(&p, tol) - d.value).abs() < 1e-12);
    }

    #[test]
    fn interval_mass_examples() {
        let p = uni(&[0.0, 0.0, 0.0, 1.0, 2.0]);
        assert!((delta_interval(&p, 0.0).unwrap() - 0.6).abs() < 1e-12);
        assert!((delta_interval(&p, 2.0).unwrap() - 0.6).abs() < 1e-12);
        let q = uni(&[1.0, 2.0, 3.0]);
        for lambda in [0.0, 0.5, 1.0, 10.0] {
            assert!((delta_interval(&q, lambda).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(delta_interval(&q, -1.0).is_err());
    }

    #[test]
    fn interval_mass_is_monotone_in_lambda() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let n = rng.random_range(2..9usize);
            let vals: Vec<f64> = (0..n)
                .map(|_| (rng.random_range(-3..=3i32)) as f64)
                .collect();
            let p = uni(&vals);
            let mut last = 0.0;
            for step in 0..8 {
                let v = delta_interval(&p, step as f64 * 0.5).unwrap();
                assert!(v >= last - 1e-15, "{vals:?}");
                last = v;
            }
        }
    }

    #[test]
    fn bounds_match_hand_computations() {
        match theorem_bounds(6, 0.0, true).unwrap() {
            BoundOutcome::Bounds {
                population_bound,
                fsbp_bound,
                fsbp_numerator,
                n,
            } => {
                assert_eq!(population_bound, 0.5);
                assert_eq!(fsbp_bound, 0.5);
                assert_eq!((fsbp_numerator, n), (3, 6));
            }
            other => panic!("{other:?}"),
        }
        match theorem_bounds(5, 0.6, true).unwrap() {
            BoundOutcome::Bounds {
                fsbp_bound,
                fsbp_numerator,
                ..
            } => {
                assert_eq!(fsbp_numerator, 1);
                assert!((fsbp_bound - 0.2).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            theorem_bounds(7, 1.0, true).unwrap().fsbp_bound(),
            Some(0.0)
        );
        // Refusal and error paths.
        assert_eq!(
            theorem_bounds(5, 0.2, false).unwrap(),
            BoundOutcome::NoBreakingElements
        );
        assert!(matches!(
            theorem_bounds(5, 1.2, true),
            Err(Error::DeltaRange { .. })
        ));
        assert!(matches!(
            theorem_bounds(0, 0.0, true),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn bounds_are_monotone_in_delta() {
        for n in [3usize, 5, 6, 10] {
            let mut last = f64::INFINITY;
            for i in 0..=20 {
                let delta = i as f64 / 20.0;
                let b = theorem_bounds(n, delta, true)
                    .unwrap()
                    .fsbp_bound()
                    .unwrap();
                assert!(b <= last + 1e-15, "n={n} delta={delta}");
                last = b;
            }
        }
    }

    #[test]
    fn integer_snap_keeps_rational_masses_on_step() {
        // Δ = 1/3 on n = 6 gives nΔ = 2 up to roundoff; the bound must be
        // floor(5/2)/6 = 2/6 either way.
        let delta = 1.0 / 3.0;
        let b = theorem_bounds(6, delta, true).unwrap();
        assert_eq!(b.fsbp_bound(), Some(2.0 / 6.0));
    }

    #[test]
    fn family_dispatch_and_refusals() {
        let p = uni(&[1.0, 2.0, 2.0]);
        let d = delta_for_family(&p, &GroupFamily::Translation { dim: 1 }).unwrap();
        assert_eq!(d.value, 0.0);
        let d = delta_for_family(&p, &GroupFamily::Affine { dim: 1 }).unwrap();
        assert!((d.value - 2.0 / 3.0).abs() < 1e-12);

        let mm = EmpiricalMeasure::from_points(
            vec![vec![1.0, 0.5], vec![2.0, 0.6]],
            SampleSpaceKind::PositiveCarrier,
        )
        .unwrap();
        assert_eq!(
            delta_for_family(&mm, &GroupFamily::ScaleX).unwrap().value,
            0.0
        );

        assert!(matches!(
            delta_for_family(&p, &GroupFamily::Orthogonal { dim: 1 }),
            Err(Error::UnknownGroupDelta { .. })
        ));
        let b = EmpiricalMeasure::from_points(
            vec![vec![1.0, 0.5], vec![0.0, -0.5]],
            SampleSpaceKind::BinaryResponse { covariate_dim: 1 },
        )
        .unwrap();
        assert!(matches!(
            delta_for_family(&b, &GroupFamily::BinaryResponse { covariate_dim: 1 }),
            Err(Error::UnknownGroupDelta { .. })
        ));
        // bound_for refuses before computing a degenerate mass.
        let (_, bound) = bound_for(
            &b,
            &GroupFamily::BinaryResponse { covariate_dim: 1 },
            crate::group::ParamMetricKind::Euclidean,
        )
        .unwrap();
        assert_eq!(bound, BoundOutcome::NoBreakingElements);
        assert_eq!(bound.describe(), "no bound: group has no breaking elements");
    }

    #[test]
    fn bound_for_reproduces_scale_examples() {
        use crate::group::ParamMetricKind::{Euclidean, ScaleLog};
        // Heavy tie at zero caps the scale-equivariant breakdown at 1/5.
        let p = uni(&[0.0, 0.0, 0.0, 1.0, 2.0]);
        let (d, b) = bound_for(&p, &GroupFamily::Affine { dim: 1 }, ScaleLog).unwrap();
        assert!((d.value - 0.6).abs() < 1e-12);
        assert_eq!(b.fsbp_bound(), Some(0.2));
        assert_eq!(b.describe(), "1/5");
        // Distinct points leave room for 2/5.
        let q = uni(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let (d, b) = bound_for(&q, &GroupFamily::Affine { dim: 1 }, ScaleLog).unwrap();
        assert!((d.value - 0.2).abs() < 1e-12);
        assert_eq!(b.fsbp_bound(), Some(0.4));
        // Translations bound the median at 3/5 on five points.
        let (_, b) = bound_for(&q, &GroupFamily::Translation { dim: 1 }, Euclidean).unwrap();
        assert_eq!(b.fsbp_bound(), Some(0.6));
    }
}
