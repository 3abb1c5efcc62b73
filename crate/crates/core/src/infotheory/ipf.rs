use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use super::distribution::{Distribution3, Pair};
use super::entropy::{entropy_bits, mu_star};
use super::InfoError;

/// Convergence settings for iterative proportional fitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpfConfig {
    /// Largest allowed absolute difference of any bivariate marginal cell.
    pub tol: f64,
    /// Maximum number of XY→XZ→YZ cycles.
    pub max_iter: usize,
}

impl Default for IpfConfig {
    fn default() -> Self {
        IpfConfig { tol: 1e-10, max_iter: 10_000 }
    }
}

impl IpfConfig {
    fn validate(&self) -> Result<(), InfoError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(InfoError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(InfoError::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// The maximum-entropy table sharing all three bivariate marginals with the
/// input.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntFit {
    pub table: Distribution3,
    pub iterations: usize,
    /// L∞ distance between fitted and target bivariate marginals.
    pub residual: f64,
}

/// Fits the no-three-way-interaction model by iterative proportional
/// fitting, cycling XY, XZ, YZ.
///
/// The start table is uniform over [`max_entropy_support`], so cells that
/// are zero in every table with the input's bivariate marginals start (and
/// stay) at zero. Without that restriction IPF only approaches such cells
/// at a sublinear rate. If the residual is still above `tol` after
/// `max_iter` cycles the best table is returned inside
/// [`InfoError::NoConvergence`].
pub fn ipf_maxent(dist: &Distribution3, config: IpfConfig) -> Result<MaxEntFit, InfoError> {
    config.validate()?;
    let dims = dist.dims();
    let targets: Vec<(Pair, Vec<f64>)> =
        Pair::ALL.iter().map(|&pair| (pair, dist.marginal_pair(pair))).collect();

    let support = max_entropy_support(dist);
    let size = support.iter().filter(|&&s| s).count() as f64;
    let mut q: Vec<f64> = support.iter().map(|&s| if s { 1.0 / size } else { 0.0 }).collect();
    let mut residual = f64::INFINITY;
    for iteration in 1..=config.max_iter {
        for (pair, target) in &targets {
            scale_to_marginal(&mut q, dims, *pair, target);
        }
        residual = marginal_residual(&q, dims, &targets);
        if residual <= config.tol {
            return Ok(MaxEntFit {
                table: Distribution3::from_raw(dims, q),
                iterations: iteration,
                residual,
            });
        }
    }
    Err(InfoError::NoConvergence {
        iterations: config.max_iter,
        residual,
        best: Box::new(Distribution3::from_raw(dims, q)),
    })
}

/// Cells that are positive in at least one table sharing all three
/// bivariate marginals with `dist`; this is the support of the
/// maximum-entropy table.
///
/// Cells observed positive qualify directly and cells under a zero marginal
/// are excluded directly. Every remaining cell is settled by a linear
/// program maximizing its mass over the marginal polytope.
pub fn max_entropy_support(dist: &Distribution3) -> Vec<bool> {
    let dims = dist.dims();
    let marginals: Vec<(Pair, Vec<f64>)> =
        Pair::ALL.iter().map(|&pair| (pair, dist.marginal_pair(pair))).collect();
    let pair_cell = |idx: [usize; 3], pair: Pair| {
        let (a, b) = pair.axes();
        idx[a] * dims[b] + idx[b]
    };
    let mut support = vec![false; dist.probs().len()];
    let mut candidates = Vec::new();
    dist.for_each_cell(|idx, p| {
        let n = dist.index(idx[0], idx[1], idx[2]);
        if p > 0.0 {
            support[n] = true;
        } else if marginals.iter().all(|(pair, m)| m[pair_cell(idx, *pair)] > 0.0) {
            candidates.push(n);
        }
    });

    for &cell in &candidates {
        if support[cell] {
            continue;
        }
        match maximize_cell(dist, &marginals, cell) {
            Some(solution) => {
                for (n, &v) in solution.iter().enumerate() {
                    if v > SUPPORT_EPS {
                        support[n] = true;
                    }
                }
            }
            None => {
                log::warn!("support LP failed for cell {cell}; keeping it in the IPF start table");
                support[cell] = true;
            }
        }
    }
    support
}

const SUPPORT_EPS: f64 = 1e-12;

/// Solves `max q[cell]` over non-negative tables with the given bivariate
/// marginals. Returns the optimal table, or `None` if the solver fails.
fn maximize_cell(dist: &Distribution3, marginals: &[(Pair, Vec<f64>)], cell: usize) -> Option<Vec<f64>> {
    let dims = dist.dims();
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..dist.probs().len())
        .map(|n| problem.add_var(if n == cell { 1.0 } else { 0.0 }, (0.0, 1.0)))
        .collect();
    for (pair, target) in marginals {
        let (a, b) = pair.axes();
        let mut rows: Vec<Vec<(microlp::Variable, f64)>> = vec![Vec::new(); target.len()];
        dist.for_each_cell(|idx, _| {
            let n = dist.index(idx[0], idx[1], idx[2]);
            rows[idx[a] * dims[b] + idx[b]].push((vars[n], 1.0));
        });
        for (row, &t) in rows.iter().zip(target) {
            problem.add_constraint(row.as_slice(), ComparisonOp::Eq, t);
        }
    }
    let solution = problem.solve().ok()?.into_solution().ok()?;
    Some(vars.iter().map(|&v| solution.var_value(v)).collect())
}

fn pair_marginal(q: &[f64], dims: [usize; 3], pair: Pair) -> Vec<f64> {
    Distribution3::from_raw(dims, q.to_vec()).marginal_pair(pair)
}

fn scale_to_marginal(q: &mut [f64], dims: [usize; 3], pair: Pair, target: &[f64]) {
    let current = pair_marginal(q, dims, pair);
    let factors: Vec<f64> =
        current.iter().zip(target).map(|(&c, &t)| if c > 0.0 { t / c } else { 0.0 }).collect();
    let (a, b) = pair.axes();
    let nb = dims[b];
    let mut n = 0;
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let idx = [i, j, k];
                q[n] *= factors[idx[a] * nb + idx[b]];
                n += 1;
            }
        }
    }
}

fn marginal_residual(q: &[f64], dims: [usize; 3], targets: &[(Pair, Vec<f64>)]) -> f64 {
    targets
        .iter()
        .flat_map(|(pair, target)| {
            pair_marginal(q, dims, *pair)
                .into_iter()
                .zip(target.iter())
                .map(|(c, t)| (c - t).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// `H(max-entropy fit) - H_xyz`, the information in the three-way
/// interaction beyond all pairwise marginals. Round-off negatives are
/// clamped to zero.
pub fn interaction_information(dist: &Distribution3, config: IpfConfig) -> Result<f64, InfoError> {
    let fit = ipf_maxent(dist, config)?;
    Ok(interaction_from_fit(dist, &fit))
}

pub(crate) fn interaction_from_fit(dist: &Distribution3, fit: &MaxEntFit) -> f64 {
    (entropy_bits(fit.table.probs()) - entropy_bits(dist.probs())).max(0.0)
}

/// Redundancy, reported as `mu_star + interaction_information`.
pub fn redundancy(dist: &Distribution3, config: IpfConfig) -> Result<f64, InfoError> {
    Ok(mu_star(dist) + interaction_information(dist, config)?)
}
