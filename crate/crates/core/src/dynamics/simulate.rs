use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::maps::{Branch, MapKind, VanishCause};
use super::DynamicsError;

/// How the root is chosen at steps with two forward solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum RootPolicy {
    /// Plus with probability `p_plus`, drawn fresh at every two-valued step.
    RandomSign {
        p_plus: f64,
    },
    AlwaysPlus,
    AlwaysMinus,
}

impl Default for RootPolicy {
    fn default() -> Self {
        RootPolicy::RandomSign { p_plus: 0.5 }
    }
}

impl RootPolicy {
    pub fn random(p_plus: f64) -> Result<Self, DynamicsError> {
        let policy = RootPolicy::RandomSign { p_plus };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        match *self {
            RootPolicy::RandomSign { p_plus } if !(0.0..=1.0).contains(&p_plus) => {
                Err(DynamicsError::InvalidProbability(p_plus))
            }
            _ => Ok(()),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Branch {
        match *self {
            RootPolicy::AlwaysPlus => Branch::Plus,
            RootPolicy::AlwaysMinus => Branch::Minus,
            RootPolicy::RandomSign { p_plus } => {
                if rng.random::<f64>() < p_plus {
                    Branch::Plus
                } else {
                    Branch::Minus
                }
            }
        }
    }
}

/// Everything that determines a trajectory.
///
/// The branch generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`;
/// a uniform `f64` in `[0, 1)` is drawn only at steps of two-valued maps
/// under [`RootPolicy::RandomSign`], and the plus root is taken when the draw
/// is below `p_plus`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub map: MapKind,
    pub x0: f64,
    pub steps: usize,
    pub seed: u64,
    pub root_policy: RootPolicy,
}

impl SimConfig {
    pub fn new(
        map: MapKind,
        x0: f64,
        steps: usize,
        seed: u64,
        root_policy: RootPolicy,
    ) -> Result<Self, DynamicsError> {
        let config = SimConfig { map, x0, steps, seed, root_policy };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.steps == 0 {
            return Err(DynamicsError::ZeroSteps);
        }
        if !self.x0.is_finite() {
            return Err(DynamicsError::NonFiniteState(self.x0));
        }
        // Re-check the parameter in case the config was deserialized.
        MapKind::new(self.map.family(), self.map.parameter())?;
        self.root_policy.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The step out of state `at_step` had no valid solution.
    Vanished {
        at_step: usize,
        cause: VanishCause,
    },
}

impl Termination {
    pub fn vanished_at(&self) -> Option<usize> {
        match *self {
            Termination::Completed => None,
            Termination::Vanished { at_step, .. } => Some(at_step),
        }
    }
}

/// Recorded states `x_0..x_n` plus how the run ended. A vanished run at step
/// `k` holds exactly `k + 1` states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub states: Vec<f64>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> f64 {
        *self.states.last().expect("trajectory always holds x0")
    }

    pub fn mean(&self) -> f64 {
        self.states.iter().sum::<f64>() / self.states.len() as f64
    }
}

/// Iterates the configured map, handing each state (including `x0`) to
/// `visit`. Returns how the run ended.
pub(crate) fn drive(config: &SimConfig, mut visit: impl FnMut(f64)) -> Result<Termination, DynamicsError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let two_valued = config.map.family().is_two_valued();
    let mut x = config.x0;
    visit(x);
    for step in 0..config.steps {
        let branch = if two_valued { config.root_policy.draw(&mut rng) } else { Branch::Plus };
        match config.map.advance(x, branch) {
            Ok(next) => {
                x = next;
                visit(x);
            }
            Err(cause) => return Ok(Termination::Vanished { at_step: step, cause }),
        }
    }
    Ok(Termination::Completed)
}

/// Runs one trajectory. Identical configs give bit-identical trajectories.
pub fn simulate(config: &SimConfig) -> Result<Trajectory, DynamicsError> {
    let mut states = Vec::with_capacity(config.steps.saturating_add(1).min(1 << 20));
    let termination = drive(config, |x| states.push(x))?;
    Ok(Trajectory { states, termination })
}
