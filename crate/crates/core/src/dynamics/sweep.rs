use rayon::prelude::*;
use serde::Serialize;

use super::maps::{MapFamily, MapKind};
use super::simulate::{drive, RootPolicy, SimConfig, Termination};
use super::DynamicsError;

/// A grid of parameter values, each explored with `runs_per_point`
/// independent trajectories.
///
/// Run `r` at every grid point uses seed `base_seed.wrapping_add(r)`, so the
/// same branch draws are reused across parameter values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub family: MapFamily,
    pub grid: Vec<f64>,
    pub runs_per_point: usize,
    pub base_seed: u64,
    pub steps_cap: usize,
    pub x0: f64,
    pub root_policy: RootPolicy,
}

impl SweepConfig {
    pub fn run_seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }
}

/// Termination statistics for one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalStats {
    pub parameter_value: f64,
    pub n_runs: usize,
    /// Vanishing steps of the runs that vanished, ascending.
    pub termination_steps: Vec<usize>,
    pub fraction_terminated: f64,
    /// Mean number of completed steps per run. Runs that reached the cap
    /// contribute the cap.
    pub mean_lifetime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunRecord {
    pub param: f64,
    pub run: usize,
    pub termination_step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub stats: Vec<SurvivalStats>,
    pub runs: Vec<RunRecord>,
}

/// Runs every grid point. Runs execute in parallel; the result is identical
/// to sequential execution.
pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome, DynamicsError> {
    if config.grid.is_empty() {
        return Err(DynamicsError::EmptyGrid);
    }
    if config.runs_per_point == 0 {
        return Err(DynamicsError::ZeroRuns);
    }
    let mut stats = Vec::with_capacity(config.grid.len());
    let mut runs = Vec::with_capacity(config.grid.len() * config.runs_per_point);

    for &param in &config.grid {
        let map = MapKind::new(config.family, param)?;
        let terminations: Vec<Termination> = (0..config.runs_per_point)
            .into_par_iter()
            .map(|run| {
                let sim = SimConfig::new(
                    map,
                    config.x0,
                    config.steps_cap,
                    config.run_seed(run),
                    config.root_policy,
                )?;
                drive(&sim, |_| {})
            })
            .collect::<Result<_, _>>()?;

        let mut termination_steps = Vec::new();
        let mut lifetime_total = 0u128;
        for (run, termination) in terminations.iter().enumerate() {
            let vanished = termination.vanished_at();
            lifetime_total += vanished.unwrap_or(config.steps_cap) as u128;
            termination_steps.extend(vanished);
            runs.push(RunRecord { param, run, termination_step: vanished });
        }
        termination_steps.sort_unstable();
        let n_runs = config.runs_per_point;
        stats.push(SurvivalStats {
            parameter_value: param,
            n_runs,
            fraction_terminated: termination_steps.len() as f64 / n_runs as f64,
            mean_lifetime: lifetime_total as f64 / n_runs as f64,
            termination_steps,
        });
    }
    Ok(SweepOutcome { stats, runs })
}
