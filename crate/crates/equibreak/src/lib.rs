//! Finite-sample breakdown analysis for equivariant estimators.

pub mod battery;
pub mod breakdown;
pub mod cli;
pub mod degeneracy;
pub mod equivariance;
pub mod error;
pub mod estimators;
pub mod fit;
pub mod group;
pub mod ingest;
pub mod measure;

pub use error::{Error, Result};
