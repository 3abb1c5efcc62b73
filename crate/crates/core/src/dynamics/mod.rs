//! Logistic-family dynamics: single-step maps, seeded trajectories and
//! parameter sweeps of survival.

mod export;
mod maps;
mod simulate;
mod sweep;

use thiserror::Error;

pub use export::{write_sweep_csv, write_trajectory_csv};
pub use maps::{
    step_double_contingency, step_incursive, step_interaction, step_logistic, step_organization,
    step_self_organization, Branch, MapFamily, MapKind, OrganizationStep, VanishCause,
};
pub use simulate::{simulate, RootPolicy, SimConfig, Termination, Trajectory};
pub use sweep::{sweep, RunRecord, SurvivalStats, SweepConfig, SweepOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("parameter {name} must be finite and strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("incursive denominator 1 + a*x vanishes at x = {x}")]
    DegenerateDenominator { x: f64 },
    #[error("no real root: discriminant {discriminant} is negative")]
    NoRealRoot { discriminant: f64 },
    #[error("negative radicand {radicand}")]
    NegativeRadicand { radicand: f64 },
    #[error("negative state {x} is not a valid expectation")]
    NegativeState { x: f64 },
    #[error("p_plus must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("initial state must be finite, got {0}")]
    NonFiniteState(f64),
    #[error("unknown map family {0:?}")]
    UnknownMap(String),
    #[error("parameter grid is empty")]
    EmptyGrid,
    #[error("runs per grid point must be at least 1")]
    ZeroRuns,
}
