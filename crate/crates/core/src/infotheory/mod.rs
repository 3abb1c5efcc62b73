//! Shannon entropies, transmissions, the signed three-way information μ*,
//! maximum-entropy fitting and the interaction/redundancy decomposition.
//!
//! All quantities are in bits.

mod distribution;
mod entropy;
pub mod fixtures;
mod ipf;
mod report;

use thiserror::Error;

pub use distribution::{Axis, ContingencyTable, Distribution3, Pair, NORMALIZATION_TOL};
pub use entropy::{entropy, mu_star, transmission, JointEntropies};
pub use ipf::{interaction_information, ipf_maxent, max_entropy_support, redundancy, IpfConfig, MaxEntFit};
pub use report::{EntropyReport, Millibits};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("probability {0} is negative or not finite")]
    NegativeProbability(f64),
    #[error("table has {found} cells, expected {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("every axis needs at least one category")]
    EmptyAxis,
    #[error("table has zero total count")]
    EmptyTable,
    #[error("cell index {0:?} outside the table")]
    IndexOutOfRange([usize; 3]),
    #[error(
        "iterative proportional fitting did not converge: residual {residual:e} after {iterations} cycles"
    )]
    NoConvergence { iterations: usize, residual: f64, best: Box<Distribution3> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed table: {0}")]
    Format(String),
}
