//! Correlation, symmetric eigendecomposition, principal components and
//! varimax rotation.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::DocMatrix;

/// Sweep cap of the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("variable {0:?} has zero variance")]
    ZeroVariance(String),
    #[error("need at least two documents, got {0}")]
    TooFewObservations(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (|a_ij - a_ji| = {0:e})")]
    NotSymmetric(f64),
    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("eigenvalue {index} is {value}, cannot extract a component from it")]
    NonPositiveEigenvalue { index: usize, value: f64 },
    #[error("requested {requested} components from {available} variables")]
    TooManyComponents { requested: usize, available: usize },
    #[error("varimax needs at least two factors, got {0}")]
    TooFewFactors(usize),
    #[error("varimax did not converge within {sweeps} sweeps")]
    VarimaxNoConvergence { sweeps: usize, best: Box<VarimaxFit> },
    #[error("output failed: {0}")]
    Io(String),
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Whether loadings are extracted from correlations or raw covariances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    #[default]
    Correlation,
    Covariance,
}

/// A labelled symmetric association matrix: Pearson correlations (unit
/// diagonal) or sample covariances, depending on `basis`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub r: Matrix,
    pub basis: Basis,
}

struct ColumnMoments {
    centered: Vec<Vec<f64>>,
    sum_squares: Vec<f64>,
}

fn column_moments(m: &DocMatrix) -> ColumnMoments {
    let n = m.n_docs() as f64;
    let mut centered = Vec::with_capacity(m.n_vars());
    let mut sum_squares = Vec::with_capacity(m.n_vars());
    for v in 0..m.n_vars() {
        let col: Vec<f64> = m.column(v).map(f64::from).collect();
        let mean = col.iter().sum::<f64>() / n;
        let c: Vec<f64> = col.iter().map(|x| x - mean).collect();
        sum_squares.push(c.iter().map(|x| x * x).sum());
        centered.push(c);
    }
    ColumnMoments { centered, sum_squares }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pearson correlation between variable columns. Any constant column is an
/// error.
pub fn correlation(m: &DocMatrix) -> Result<CorrelationMatrix, LinalgError> {
    association(m, Basis::Correlation, false).map(|(r, _)| r)
}

/// Like [`correlation`], but constant columns are dropped (with a warning)
/// and their labels returned. Fails only if every column is constant.
pub fn correlation_dropping_constant(m: &DocMatrix) -> Result<(CorrelationMatrix, Vec<String>), LinalgError> {
    association(m, Basis::Correlation, true)
}

/// Sample covariance (divisor `n - 1`) between variable columns, dropping
/// constant columns like [`correlation_dropping_constant`].
pub fn covariance_dropping_constant(m: &DocMatrix) -> Result<(CorrelationMatrix, Vec<String>), LinalgError> {
    association(m, Basis::Covariance, true)
}

fn association(
    m: &DocMatrix,
    basis: Basis,
    drop_constant: bool,
) -> Result<(CorrelationMatrix, Vec<String>), LinalgError> {
    if m.n_docs() < 2 {
        return Err(LinalgError::TooFewObservations(m.n_docs()));
    }
    let moments = column_moments(m);
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for (v, &ss) in moments.sum_squares.iter().enumerate() {
        if ss > 0.0 {
            keep.push(v);
        } else if drop_constant {
            log::warn!("dropping constant variable {:?}", m.variables()[v]);
            dropped.push(m.variables()[v].clone());
        } else {
            return Err(LinalgError::ZeroVariance(m.variables()[v].clone()));
        }
    }
    if keep.is_empty() {
        let first = m.variables().first().cloned().unwrap_or_default();
        return Err(LinalgError::ZeroVariance(first));
    }
    let p = keep.len();
    let mut r = Matrix::zeros(p, p);
    let divisor = (m.n_docs() - 1) as f64;
    for (a, &va) in keep.iter().enumerate() {
        for (b, &vb) in keep.iter().enumerate().skip(a) {
            let value = match basis {
                Basis::Correlation if a == b => 1.0,
                Basis::Correlation => {
                    let c = dot(&moments.centered[va], &moments.centered[vb])
                        / (moments.sum_squares[va] * moments.sum_squares[vb]).sqrt();
                    c.clamp(-1.0, 1.0)
                }
                Basis::Covariance => dot(&moments.centered[va], &moments.centered[vb]) / divisor,
            };
            r[(a, b)] = value;
            r[(b, a)] = value;
        }
    }
    let labels = keep.iter().map(|&v| m.variables()[v].clone()).collect();
    Ok((CorrelationMatrix { labels, r, basis }, dropped))
}

/// Eigenvalues in descending order with matching unit eigenvectors as
/// columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps rotate every off-diagonal pair in row order until the
/// off-diagonal Frobenius norm falls below `1e-15` of the total norm, or
/// [`JACOBI_MAX_SWEEPS`] is exhausted. Each eigenvector is signed so that
/// its largest-magnitude component is positive.
pub fn eigh(a: &Matrix) -> Result<SymmetricEigen, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    let scale = a.data.iter().map(|v| v * v).sum::<f64>().sqrt();
    let defect = a.symmetry_defect();
    if defect > 1e-12 * scale.max(1.0) {
        return Err(LinalgError::NotSymmetric(defect));
    }
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let threshold = 1e-15 * scale;

    let off_norm = |m: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[(i, j)] * m[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&m) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off_norm: off_norm(&m) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // M <- Jᵀ M J with J the (p, q) rotation [[c, s], [-s, c]].
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let sign = dominant_sign(&col);
        for k in 0..n {
            vectors[(k, dst)] = sign * col[k];
        }
    }
    Ok(SymmetricEigen { values, vectors, sweeps })
}

/// `+1` if the largest-magnitude entry is non-negative, else `-1`. Ties go to
/// the first entry.
fn dominant_sign(values: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for &x in values {
        if x.abs() > best.abs() {
            best = x;
        }
    }
    if best < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Variables × components loadings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadingsMatrix {
    pub labels: Vec<String>,
    pub loadings: Matrix,
    pub rotated: bool,
}

impl LoadingsMatrix {
    pub fn n_factors(&self) -> usize {
        self.loadings.cols()
    }

    /// Row sums of squared loadings.
    pub fn communalities(&self) -> Vec<f64> {
        (0..self.loadings.rows()).map(|i| self.loadings.row(i).iter().map(|x| x * x).sum()).collect()
    }

    /// Writes `variable,f1,...,fk`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), LinalgError> {
        let io = |e: csv::Error| LinalgError::Io(e.to_string());
        let mut writer = csv::Writer::from_writer(out);
        let header =
            std::iter::once("variable".to_string()).chain((1..=self.n_factors()).map(|j| format!("f{j}")));
        writer.write_record(header).map_err(io)?;
        for (i, label) in self.labels.iter().enumerate() {
            let row = self.loadings.row(i).iter().map(|x| x.to_string());
            writer.write_record(std::iter::once(label.clone()).chain(row)).map_err(io)?;
        }
        writer.flush().map_err(|e| LinalgError::Io(e.to_string()))
    }
}

/// Unrotated loadings `L_ij = v_ij √λ_j` of the `k` leading components.
pub fn principal_components(r: &CorrelationMatrix, k: usize) -> Result<LoadingsMatrix, LinalgError> {
    let n = r.r.rows();
    if k == 0 || k > n {
        return Err(LinalgError::TooManyComponents { requested: k, available: n });
    }
    let eigen = eigh(&r.r)?;
    let mut loadings = Matrix::zeros(n, k);
    for j in 0..k {
        let lambda = eigen.values[j];
        if lambda <= 1e-12 * n as f64 {
            return Err(LinalgError::NonPositiveEigenvalue { index: j, value: lambda });
        }
        let root = lambda.sqrt();
        for i in 0..n {
            loadings[(i, j)] = eigen.vectors[(i, j)] * root;
        }
    }
    Ok(LoadingsMatrix { labels: r.labels.clone(), loadings, rotated: false })
}

/// Varimax criterion: the sum over factors of the variance of squared
/// loadings, `Σ_j [n Σ_i x_ij⁴ - (Σ_i x_ij²)²] / n²`.
pub fn varimax_criterion(l: &Matrix) -> f64 {
    let n = l.rows() as f64;
    if l.rows() == 0 {
        return 0.0;
    }
    (0..l.cols())
        .map(|j| {
            let (s2, s4) = (0..l.rows()).fold((0.0, 0.0), |(s2, s4), i| {
                let sq = l[(i, j)] * l[(i, j)];
                (s2 + sq, s4 + sq * sq)
            });
            (n * s4 - s2 * s2) / (n * n)
        })
        .sum()
}

/// Output of [`varimax`].
#[derive(Debug, Clone, PartialEq)]
pub struct VarimaxFit {
    pub loadings: LoadingsMatrix,
    /// Orthogonal `k × k` matrix with `rotated = unrotated · rotation`.
    pub rotation: Matrix,
    /// Criterion on the Kaiser-normalized loadings: the starting value, then
    /// one entry per sweep.
    pub criterion_history: Vec<f64>,
    pub sweeps: usize,
}

/// Varimax rotation with Kaiser row normalization.
///
/// Each sweep visits every factor pair and applies the planar rotation that
/// maximizes the criterion in that plane, so the criterion never decreases.
/// Iteration stops once a sweep gains less than `tol`. Afterwards each
/// column is signed so its largest-magnitude loading is positive.
pub fn varimax(l: &LoadingsMatrix, tol: f64, max_iter: usize) -> Result<VarimaxFit, LinalgError> {
    let (n, k) = (l.loadings.rows(), l.loadings.cols());
    if k < 2 {
        return Err(LinalgError::TooFewFactors(k));
    }
    let norms: Vec<f64> = l.communalities().iter().map(|h| h.sqrt()).collect();
    let mut x = l.loadings.clone();
    for i in 0..n {
        if norms[i] > 0.0 {
            for j in 0..k {
                x[(i, j)] /= norms[i];
            }
        }
    }
    let mut rotation = Matrix::identity(k);
    let mut history = vec![varimax_criterion(&x)];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_iter {
        sweeps += 1;
        for p in 0..k {
            for q in (p + 1)..k {
                let phi = planar_varimax_angle(&x, p, q);
                if phi == 0.0 {
                    continue;
                }
                let (s, c) = phi.sin_cos();
                rotate_columns(&mut x, p, q, c, s);
                rotate_columns(&mut rotation, p, q, c, s);
            }
        }
        let value = varimax_criterion(&x);
        let gain = value - history.last().copied().unwrap_or(0.0);
        history.push(value);
        if gain < tol {
            converged = true;
            break;
        }
    }

    for i in 0..n {
        if norms[i] > 0.0 {
            for j in 0..k {
                x[(i, j)] *= norms[i];
            }
        }
    }
    for j in 0..k {
        if dominant_sign(&x.column(j)) < 0.0 {
            for i in 0..n {
                x[(i, j)] = -x[(i, j)];
            }
            for i in 0..k {
                rotation[(i, j)] = -rotation[(i, j)];
            }
        }
    }
    let fit = VarimaxFit {
        loadings: LoadingsMatrix { labels: l.labels.clone(), loadings: x, rotated: true },
        rotation,
        criterion_history: history,
        sweeps,
    };
    if converged {
        Ok(fit)
    } else {
        Err(LinalgError::VarimaxNoConvergence { sweeps, best: Box::new(fit) })
    }
}

/// Angle of the criterion-maximizing rotation in the (p, q) plane, using
/// the closed form `tan 4φ = (D - 2AB/n) / (C - (A² - B²)/n)`.
fn planar_varimax_angle(x: &Matrix, p: usize, q: usize) -> f64 {
    let n = x.rows() as f64;
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..x.rows() {
        let (xp, xq) = (x[(i, p)], x[(i, q)]);
        let u = xp * xp - xq * xq;
        let v = 2.0 * xp * xq;
        a += u;
        b += v;
        c += u * u - v * v;
        d += 2.0 * u * v;
    }
    let num = d - 2.0 * a * b / n;
    let den = c - (a * a - b * b) / n;
    let scale = c.abs() + d.abs() + (a * a + b * b) / n;
    if num.hypot(den) <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
        return 0.0;
    }
    num.atan2(den) / 4.0
}

/// Replaces columns p, q by `(c·x_p + s·x_q, -s·x_p + c·x_q)`.
fn rotate_columns(x: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..x.rows() {
        let (xp, xq) = (x[(i, p)], x[(i, q)]);
        x[(i, p)] = c * xp + s * xq;
        x[(i, q)] = -s * xp + c * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::MatrixKind;

    fn doc_matrix(columns: &[&[u32]]) -> DocMatrix {
        let n_docs = columns[0].len();
        let mut cells = Vec::new();
        for d in 0..n_docs {
            cells.extend(columns.iter().map(|c| c[d]));
        }
        DocMatrix::new(
            (0..n_docs).map(|d| d.to_string()).collect(),
            (0..columns.len()).map(|v| format!("v{v}")).collect(),
            cells,
            MatrixKind::Words,
        )
        .unwrap()
    }

    #[test]
    fn correlation_examples() {
        let r = correlation(&doc_matrix(&[&[1, 2, 3, 4], &[1, 2, 3, 4]])).unwrap();
        assert!((r.r[(0, 1)] - 1.0).abs() < 1e-15);
        let r = correlation(&doc_matrix(&[&[1, 2, 3, 4], &[4, 3, 2, 1]])).unwrap();
        assert!((r.r[(0, 1)] + 1.0).abs() < 1e-15);
        let r = correlation(&doc_matrix(&[&[1, 2, 3, 4], &[1, 3, 2, 4]])).unwrap();
        assert!((r.r[(0, 1)] - 0.8).abs() < 1e-15);
        assert_eq!(r.r[(0, 0)], 1.0);
    }

    #[test]
    fn zero_variance_handling() {
        let m = doc_matrix(&[&[1, 2, 3], &[2, 2, 2], &[0, 1, 1]]);
        assert_eq!(correlation(&m), Err(LinalgError::ZeroVariance("v1".into())));
        let (r, dropped) = correlation_dropping_constant(&m).unwrap();
        assert_eq!(dropped, ["v1"]);
        assert_eq!(r.labels, ["v0", "v2"]);
        let constant = doc_matrix(&[&[1, 1], &[0, 0]]);
        assert_eq!(correlation_dropping_constant(&constant), Err(LinalgError::ZeroVariance("v0".into())));
        assert_eq!(correlation(&doc_matrix(&[&[1], &[2]])), Err(LinalgError::TooFewObservations(1)));
    }

    #[test]
    fn covariance_uses_sample_divisor() {
        let m = doc_matrix(&[&[1, 2, 3, 4], &[2, 4, 6, 8]]);
        let (s, _) = covariance_dropping_constant(&m).unwrap();
        assert!((s.r[(0, 0)] - 5.0 / 3.0).abs() < 1e-15);
        assert!((s.r[(0, 1)] - 10.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.basis, Basis::Covariance);
    }

    #[test]
    fn eigh_examples() {
        let e = eigh(&Matrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let e = eigh(&Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]])).unwrap();
        assert!((e.values[0] - 1.5).abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[(0, 0)] - h).abs() < 1e-15 && (e.vectors[(1, 0)] - h).abs() < 1e-15);
    }

    #[test]
    fn eigh_rejects_bad_input() {
        assert!(matches!(eigh(&Matrix::zeros(2, 3)), Err(LinalgError::NotSquare { .. })));
        let asym = Matrix::from_rows(&[vec![1.0, 0.2], vec![0.3, 1.0]]);
        assert!(matches!(eigh(&asym), Err(LinalgError::NotSymmetric(_))));
    }

    #[test]
    fn principal_components_examples() {
        let r = CorrelationMatrix {
            labels: vec!["a".into(), "b".into()],
            r: Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]),
            basis: Basis::Correlation,
        };
        let l = principal_components(&r, 1).unwrap();
        let expected = 0.75f64.sqrt();
        assert!((l.loadings[(0, 0)].abs() - expected).abs() < 1e-15);
        assert!((l.loadings[(1, 0)].abs() - expected).abs() < 1e-15);

        let full = principal_components(&r, 2).unwrap();
        let rebuilt = full.loadings.matmul(&full.loadings.transpose());
        assert!(rebuilt.max_abs_diff(&r.r) < 1e-12);

        let id = CorrelationMatrix {
            labels: vec!["a".into(), "b".into(), "c".into()],
            r: Matrix::identity(3),
            basis: Basis::Correlation,
        };
        let l = principal_components(&id, 1).unwrap();
        assert!(l.loadings.as_slice().iter().all(|x| x.abs() <= 1.0));
        assert!(matches!(principal_components(&id, 4), Err(LinalgError::TooManyComponents { .. })));
    }

    #[test]
    fn rank_deficient_component_is_rejected() {
        let r = CorrelationMatrix {
            labels: vec!["a".into(), "b".into()],
            r: Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]),
            basis: Basis::Correlation,
        };
        assert!(matches!(
            principal_components(&r, 2),
            Err(LinalgError::NonPositiveEigenvalue { index: 1, .. })
        ));
    }

    fn loadings(rows: &[Vec<f64>]) -> LoadingsMatrix {
        LoadingsMatrix {
            labels: (0..rows.len()).map(|i| format!("v{i}")).collect(),
            loadings: Matrix::from_rows(rows),
            rotated: false,
        }
    }

    #[test]
    fn varimax_keeps_simple_structure() {
        let l = loadings(&[
            vec![0.8, 0.0, 0.0],
            vec![0.7, 0.0, 0.0],
            vec![0.0, 0.9, 0.0],
            vec![0.0, 0.6, 0.0],
            vec![0.0, 0.0, 0.5],
        ]);
        let fit = varimax(&l, 1e-12, 100).unwrap();
        assert!(fit.loadings.loadings.max_abs_diff(&l.loadings) < 1e-12);
    }

    #[test]
    fn varimax_rotates_diagonal_rows_onto_axes() {
        // Rows at ±45° are mapped onto the axes by a 45° rotation.
        let l = loadings(&[vec![0.6, 0.6], vec![0.6, -0.6], vec![0.5, 0.5], vec![0.5, -0.5]]);
        let before = varimax_criterion(&l.loadings);
        let fit = varimax(&l, 1e-12, 100).unwrap();
        let r = &fit.rotation;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(r.as_slice().iter().all(|x| (x.abs() - h).abs() < 1e-12));
        let rotated = &fit.loadings.loadings;
        let target = 0.6 * 2f64.sqrt();
        assert!((rotated[(0, 0)].abs() - target).abs() < 1e-12 && rotated[(0, 1)].abs() < 1e-12);
        assert!(varimax_criterion(rotated) > before);
    }

    #[test]
    fn planar_angle_beats_brute_force_scan() {
        let x = Matrix::from_rows(&[
            vec![0.7, 0.3],
            vec![0.2, 0.9],
            vec![-0.4, 0.5],
            vec![0.6, -0.1],
            vec![0.1, 0.2],
        ]);
        let phi = planar_varimax_angle(&x, 0, 1);
        let eval = |theta: f64| {
            let mut y = x.clone();
            let (s, c) = theta.sin_cos();
            rotate_columns(&mut y, 0, 1, c, s);
            varimax_criterion(&y)
        };
        let best = eval(phi);
        for step in 0..=3600 {
            let theta = -std::f64::consts::FRAC_PI_4 + step as f64 * std::f64::consts::FRAC_PI_2 / 3600.0;
            assert!(eval(theta) <= best + 1e-12, "theta {theta} beats {phi}");
        }
    }

    #[test]
    fn varimax_needs_two_factors() {
        let l = loadings(&[vec![0.5], vec![0.4]]);
        assert_eq!(varimax(&l, 1e-9, 10), Err(LinalgError::TooFewFactors(1)));
    }

    #[test]
    fn loadings_csv_header() {
        let l = loadings(&[vec![0.5, 0.25, 0.0]]);
        let mut out = Vec::new();
        l.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "variable,f1,f2,f3\nv0,0.5,0.25,0\n");
    }
}
