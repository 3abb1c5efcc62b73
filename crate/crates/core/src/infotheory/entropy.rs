use super::distribution::{Axis, Distribution3, Pair, NORMALIZATION_TOL};
use super::InfoError;

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64, InfoError> {
    if let Some(&bad) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(InfoError::NegativeProbability(bad));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(InfoError::NotNormalized { sum: total });
    }
    Ok(entropy_bits(p))
}

pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    let h: f64 = p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum();
    // Avoid reporting -0.0 for deterministic tables.
    h.max(0.0)
}

/// The seven entropies of a trivariate table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEntropies {
    pub h_x: f64,
    pub h_y: f64,
    pub h_z: f64,
    pub h_xy: f64,
    pub h_xz: f64,
    pub h_yz: f64,
    pub h_xyz: f64,
}

impl JointEntropies {
    pub fn of(dist: &Distribution3) -> Self {
        JointEntropies {
            h_x: entropy_bits(&dist.marginal(Axis::X)),
            h_y: entropy_bits(&dist.marginal(Axis::Y)),
            h_z: entropy_bits(&dist.marginal(Axis::Z)),
            h_xy: entropy_bits(&dist.marginal_pair(Pair::XY)),
            h_xz: entropy_bits(&dist.marginal_pair(Pair::XZ)),
            h_yz: entropy_bits(&dist.marginal_pair(Pair::YZ)),
            h_xyz: entropy_bits(dist.probs()),
        }
    }

    /// The signed alternating sum over all seven entropies.
    pub fn mu_star(&self) -> f64 {
        self.h_x + self.h_y + self.h_z - self.h_xy - self.h_xz - self.h_yz + self.h_xyz
    }
}

/// Mutual information between two of the three variables,
/// `T = H_a + H_b - H_ab`.
pub fn transmission(dist: &Distribution3, pair: Pair) -> f64 {
    let (a, b) = match pair {
        Pair::XY => (Axis::X, Axis::Y),
        Pair::XZ => (Axis::X, Axis::Z),
        Pair::YZ => (Axis::Y, Axis::Z),
    };
    let t = entropy_bits(&dist.marginal(a)) + entropy_bits(&dist.marginal(b))
        - entropy_bits(&dist.marginal_pair(pair));
    t.max(0.0)
}

/// Signed three-way mutual information
/// `H_x + H_y + H_z - H_xy - H_xz - H_yz + H_xyz`. Negative values mean the
/// configuration reduces uncertainty.
pub fn mu_star(dist: &Distribution3) -> f64 {
    JointEntropies::of(dist).mu_star()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::fixtures::{copy_triple, independent_triple, xor_triple};

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let h = entropy(&[0.25, 0.75]).unwrap();
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(matches!(entropy(&[0.5, 0.4]), Err(InfoError::NotNormalized { .. })));
        assert!(matches!(entropy(&[1.2, -0.2]), Err(InfoError::NegativeProbability(_))));
    }

    #[test]
    fn transmission_examples() {
        assert!(transmission(&independent_triple(), Pair::XY).abs() < 1e-12);
        assert!((transmission(&copy_triple(), Pair::XZ) - 1.0).abs() < 1e-12);
        assert!(transmission(&xor_triple(), Pair::XY).abs() < 1e-12);
    }

    #[test]
    fn mu_star_examples() {
        assert!(mu_star(&independent_triple()).abs() < 1e-12);
        assert!((mu_star(&xor_triple()) + 1.0).abs() < 1e-12);
        assert!((mu_star(&copy_triple()) - 1.0).abs() < 1e-12);
    }
}
