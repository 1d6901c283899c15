//! One error type for the whole crate.
//!
//! Solver outcomes deserve special care: the breakdown engine must distinguish
//! a fit that provably has no finite minimizer ([`Error::UnboundedFit`], which
//! is evidence of breakdown) from a fit that merely failed to converge
//! ([`Error::NonConvergence`], which is never evidence of anything).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("weights must sum to 1 (got {sum})")]
    WeightSum { sum: f64 },

    #[error("weight {index} is negative")]
    NegativeWeight { index: usize },

    #[error("point {index}: expected {expected} coordinates, got {got}")]
    PointShape {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("point {index}: {reason}")]
    PointDomain { index: usize, reason: String },

    #[error("mixture weight must lie strictly between 0 and 1 (got {alpha})")]
    MixtureWeight { alpha: f64 },

    #[error("replacement index {index} out of range for sample of size {len}")]
    ReplacementIndex { index: usize, len: usize },

    #[error("replacement index {index} listed twice")]
    DuplicateIndex { index: usize },

    #[error("replacement expects {expected} new points, got {got}")]
    ReplacementCount { expected: usize, got: usize },

    #[error("sample-space mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

    #[error("{what} is only defined for univariate samples")]
    UnivariateOnly { what: String },

    #[error("invalid argument: {what}")]
    InvalidArgument { what: String },

    #[error("group element {group} cannot act on {target}")]
    IncompatibleAction { group: String, target: String },

    #[error("metric {metric} is not defined for parameter {parameter}")]
    IncompatibleMetric { metric: String, parameter: String },

    #[error("group elements {left} and {right} do not compose")]
    IncompatibleComposition { left: String, right: String },

    #[error("{what} is singular or numerically singular")]
    SingularMatrix { what: String },

    #[error("{what} is not symmetric positive definite")]
    NotPositiveDefinite { what: String },

    #[error("degenerate-set search supports dimension at most {max} (got {dim})")]
    DimensionTooHigh { dim: usize, max: usize },

    #[error("no degenerate-set rule for group family {family}")]
    UnknownGroupDelta { family: String },

    #[error("mass fraction must lie in [0, 1] (got {value})")]
    DeltaRange { value: f64 },

    #[error("{op} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        op: String,
        iterations: usize,
        residual: f64,
    },

    #[error("{op} has no finite minimizer: {reason}")]
    UnboundedFit { op: String, reason: String },

    #[error("{op} ran against a parameter boundary: {reason}")]
    BoundaryFit { op: String, reason: String },

    #[error("{op}: {reason}")]
    Unidentifiable { op: String, reason: String },

    #[error("divergence check needs at least 2 trace entries (got {len})")]
    TraceTooShort { len: usize },

    #[error("contamination ladder must be strictly increasing and positive")]
    LadderShape,

    #[error("no equivariance trial produced a usable estimate for {op}")]
    NoConvergedTrials { op: String },

    #[error("row {row}, column {col}: cannot parse {token:?} as a number")]
    ParseNumber {
        row: usize,
        col: usize,
        token: String,
    },

    #[error("row {row}: expected {expected} columns, got {got}")]
    RowShape {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("unknown {what}: {name:?}")]
    UnknownName { what: String, name: String },

    #[error("i/o error: {0}")]
    Io(String),
}
