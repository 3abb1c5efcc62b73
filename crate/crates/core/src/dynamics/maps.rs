//! Single-step maps for the recursive, incursive and hyper-incursive
//! logistic families.
//!
//! Hyper-incursive equations define the present state in terms of the next
//! one, so a forward step has to solve for `x_{t+1}`. Where that solution
//! has two roots the caller chooses the [`Branch`].

use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// Which root of a two-valued forward solution to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Why a forward-solved trajectory could not continue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishCause {
    /// The term under a root went negative.
    NegativeRadicand,
    /// The denominator under the root of the organization map reached zero
    /// or went negative (`x_t >= 1`).
    NegativeDenominator,
    /// The quadratic of the double-contingency map has no real root.
    NoRealRoot,
    /// The state overflowed to a non-finite value.
    NonFinite,
}

impl VanishCause {
    /// Event label used in trajectory exports.
    pub fn event_label(self) -> &'static str {
        match self {
            VanishCause::NegativeRadicand => "vanished:negative_radicand",
            VanishCause::NegativeDenominator => "vanished:negative_denominator",
            VanishCause::NoRealRoot => "vanished:no_real_root",
            VanishCause::NonFinite => "vanished:non_finite",
        }
    }
}

/// Recursive logistic map: `x_t = a x_{t-1} (1 - x_{t-1})`.
pub fn step_logistic(x_prev: f64, a: f64) -> f64 {
    a * x_prev * (1.0 - x_prev)
}

/// Incursive logistic map `x_t = a x_{t-1} (1 - x_t)`, solved for `x_t`.
pub fn step_incursive(x_prev: f64, a: f64) -> Result<f64, DynamicsError> {
    let denominator = 1.0 + a * x_prev;
    if denominator == 0.0 {
        return Err(DynamicsError::DegenerateDenominator { x: x_prev });
    }
    Ok(a * x_prev / denominator)
}

/// Double contingency `x_t = a x_{t+1} (1 - x_{t+1})`, solved forward.
///
/// The roots are `(1 ± √(1 - 4 x_t / a)) / 2`. The minus root is evaluated
/// through the product of roots (`x_t / a`) to avoid cancellation when the
/// discriminant is close to one.
pub fn step_double_contingency(x_t: f64, a: f64, branch: Branch) -> Result<f64, DynamicsError> {
    let discriminant = 1.0 - 4.0 * x_t / a;
    if discriminant.is_nan() || discriminant < 0.0 {
        return Err(DynamicsError::NoRealRoot { discriminant });
    }
    let root = discriminant.sqrt();
    Ok(match branch {
        Branch::Plus => (1.0 + root) / 2.0,
        Branch::Minus => {
            if x_t >= 0.0 {
                (2.0 * x_t / a) / (1.0 + root)
            } else {
                (1.0 - root) / 2.0
            }
        }
    })
}

/// Interaction `x_t = b (1 - x_{t+1})²`, solved forward as `1 ± √(x_t / b)`.
pub fn step_interaction(x_t: f64, b: f64, branch: Branch) -> Result<f64, DynamicsError> {
    let radicand = x_t / b;
    if radicand.is_nan() || radicand < 0.0 {
        return Err(DynamicsError::NegativeRadicand { radicand });
    }
    Ok(1.0 + branch.sign() * radicand.sqrt())
}

/// Real root of the self-organization cubic `x_t = c (1 - x_{t+1})³`.
///
/// Negative states are rejected: `x` is read as an expectation value, and
/// the two complex roots are never iterated.
pub fn step_self_organization(x_t: f64, c: f64) -> Result<f64, DynamicsError> {
    if x_t.is_nan() || x_t < 0.0 {
        return Err(DynamicsError::NegativeState { x: x_t });
    }
    Ok(1.0 - (x_t / c).cbrt())
}

/// Result of one organization step. Vanishing is a modelled outcome, not a
/// fault.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrganizationStep {
    Next(f64),
    Vanished(VanishCause),
}

/// Organization `x_t = d (1 - x_{t+1})² (1 - x_t)`, solved forward as
/// `1 ± √(x_t / (d (1 - x_t)))`.
///
/// `x_t >= 1` vanishes with [`VanishCause::NegativeDenominator`]; `x_t = 1`
/// is the zero-denominator limit of that case.
pub fn step_organization(x_t: f64, d: f64, branch: Branch) -> OrganizationStep {
    if x_t.is_nan() || x_t < 0.0 {
        return OrganizationStep::Vanished(VanishCause::NegativeRadicand);
    }
    if x_t >= 1.0 {
        return OrganizationStep::Vanished(VanishCause::NegativeDenominator);
    }
    let radicand = x_t / (d * (1.0 - x_t));
    OrganizationStep::Next(1.0 + branch.sign() * radicand.sqrt())
}

/// The six equation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFamily {
    Logistic,
    Incursive,
    DoubleContingency,
    Interaction,
    SelfOrganization,
    Organization,
}

impl MapFamily {
    pub const ALL: [MapFamily; 6] = [
        MapFamily::Logistic,
        MapFamily::Incursive,
        MapFamily::DoubleContingency,
        MapFamily::Interaction,
        MapFamily::SelfOrganization,
        MapFamily::Organization,
    ];

    /// Conventional symbol of the family's parameter.
    pub fn parameter_symbol(self) -> &'static str {
        match self {
            MapFamily::Logistic | MapFamily::Incursive | MapFamily::DoubleContingency => "a",
            MapFamily::Interaction => "b",
            MapFamily::SelfOrganization => "c",
            MapFamily::Organization => "d",
        }
    }

    /// Whether a forward step has two roots and therefore consumes a branch.
    pub fn is_two_valued(self) -> bool {
        matches!(self, MapFamily::DoubleContingency | MapFamily::Interaction | MapFamily::Organization)
    }

    pub fn name(self) -> &'static str {
        match self {
            MapFamily::Logistic => "logistic",
            MapFamily::Incursive => "incursive",
            MapFamily::DoubleContingency => "double-contingency",
            MapFamily::Interaction => "interaction",
            MapFamily::SelfOrganization => "self-organization",
            MapFamily::Organization => "organization",
        }
    }
}

impl std::str::FromStr for MapFamily {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_lowercase().replace('_', "-");
        MapFamily::ALL
            .into_iter()
            .find(|family| family.name() == normalized)
            .ok_or_else(|| DynamicsError::UnknownMap(s.to_string()))
    }
}

impl std::fmt::Display for MapFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A map family together with its validated, strictly positive parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapKind {
    family: MapFamily,
    parameter: f64,
}

impl MapKind {
    pub fn new(family: MapFamily, parameter: f64) -> Result<Self, DynamicsError> {
        if !(parameter.is_finite() && parameter > 0.0) {
            return Err(DynamicsError::NonPositiveParameter {
                name: family.parameter_symbol(),
                value: parameter,
            });
        }
        Ok(MapKind { family, parameter })
    }

    pub fn logistic(a: f64) -> Result<Self, DynamicsError> {
        Self::new(MapFamily::Logistic, a)
    }

    pub fn incursive(a: f64) -> Result<Self, DynamicsError> {
        Self::new(MapFamily::Incursive, a)
    }

    pub fn double_contingency(a: f64) -> Result<Self, DynamicsError> {
        Self::new(MapFamily::DoubleContingency, a)
    }

    pub fn interaction(b: f64) -> Result<Self, DynamicsError> {
        Self::new(MapFamily::Interaction, b)
    }

    pub fn self_organization(c: f64) -> Result<Self, DynamicsError> {
        Self::new(MapFamily::SelfOrganization, c)
    }

    pub fn organization(d: f64) -> Result<Self, DynamicsError> {
        Self::new(MapFamily::Organization, d)
    }

    pub fn family(&self) -> MapFamily {
        self.family
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    /// Advances one step. `branch` is only consulted by two-valued families.
    ///
    /// Every failure of the underlying stepper is reported as the
    /// [`VanishCause`] that ends a trajectory.
    pub fn advance(&self, x: f64, branch: Branch) -> Result<f64, VanishCause> {
        let p = self.parameter;
        let next = match self.family {
            MapFamily::Logistic => Ok(step_logistic(x, p)),
            MapFamily::Incursive => step_incursive(x, p).map_err(vanish_cause),
            MapFamily::DoubleContingency => step_double_contingency(x, p, branch).map_err(vanish_cause),
            MapFamily::Interaction => step_interaction(x, p, branch).map_err(vanish_cause),
            MapFamily::SelfOrganization => step_self_organization(x, p).map_err(vanish_cause),
            MapFamily::Organization => match step_organization(x, p, branch) {
                OrganizationStep::Next(v) => Ok(v),
                OrganizationStep::Vanished(cause) => Err(cause),
            },
        }?;
        if next.is_finite() {
            Ok(next)
        } else {
            Err(VanishCause::NonFinite)
        }
    }
}

fn vanish_cause(err: DynamicsError) -> VanishCause {
    match err {
        DynamicsError::NoRealRoot { .. } => VanishCause::NoRealRoot,
        DynamicsError::DegenerateDenominator { .. } => VanishCause::NegativeDenominator,
        DynamicsError::NegativeRadicand { .. } | DynamicsError::NegativeState { .. } => {
            VanishCause::NegativeRadicand
        }
        _ => VanishCause::NonFinite,
    }
}
