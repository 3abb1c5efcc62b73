//! Helpers shared by the integration tests: fixture loading and oracles
//! that avoid the library's own code paths.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use structuration::corpus::{read_corpus_csv, Document};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn load_corpus(name: &str) -> Vec<Document> {
    let file = std::fs::File::open(fixture_path(name)).expect("fixture exists");
    read_corpus_csv(file).expect("fixture parses")
}

/// Entropy in bits of a bag of masses, normalizing on the fly.
fn h_of(masses: impl IntoIterator<Item = f64>) -> f64 {
    let masses: Vec<f64> = masses.into_iter().collect();
    let total: f64 = masses.iter().sum();
    let mut h = 0.0;
    for m in masses {
        if m > 0.0 {
            let q = m / total;
            h -= q * q.ln() / std::f64::consts::LN_2;
        }
    }
    h
}

/// The seven entropies of a dense `(i, j, k)` row-major table, grouped with
/// hash maps keyed by the retained coordinates.
pub fn brute_entropies(dims: [usize; 3], p: &[f64]) -> [f64; 7] {
    let keep: [[bool; 3]; 7] = [
        [true, false, false],
        [false, true, false],
        [false, false, true],
        [true, true, false],
        [true, false, true],
        [false, true, true],
        [true, true, true],
    ];
    let mut out = [0.0; 7];
    for (slot, mask) in keep.iter().enumerate() {
        let mut groups: HashMap<(usize, usize, usize), f64> = HashMap::new();
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let key = (
                        if mask[0] { i } else { usize::MAX },
                        if mask[1] { j } else { usize::MAX },
                        if mask[2] { k } else { usize::MAX },
                    );
                    *groups.entry(key).or_default() += p[(i * dims[1] + j) * dims[2] + k];
                }
            }
        }
        out[slot] = h_of(groups.into_values());
    }
    out
}

/// `H_x + H_y + H_z - H_xy - H_xz - H_yz + H_xyz` from [`brute_entropies`].
pub fn brute_mu_star(dims: [usize; 3], p: &[f64]) -> f64 {
    let h = brute_entropies(dims, p);
    h[0] + h[1] + h[2] - h[3] - h[4] - h[5] + h[6]
}

/// Real root of `x - 1 + ∛x` on `[0, 1]` by plain bisection.
pub fn self_organization_fixed_point() -> f64 {
    let g = |x: f64| x - 1.0 + x.cbrt();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a small symmetric matrix as the roots of its
/// characteristic polynomial, located by a sign scan plus bisection of
/// `det(A - λI)` evaluated through cofactor expansion.
pub fn charpoly_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let bound: f64 = a.iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
    let det_shift = |lambda: f64| {
        let m: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| a[i][j] - if i == j { lambda } else { 0.0 }).collect()).collect();
        cofactor_det(&m)
    };
    let steps = 2_000;
    let mut roots = Vec::new();
    let mut prev_x = -bound;
    let mut prev_f = det_shift(prev_x);
    for s in 1..=steps {
        let x = -bound + 2.0 * bound * s as f64 / steps as f64;
        let f = det_shift(x);
        if f == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && (f > 0.0) != (prev_f > 0.0) {
            let (mut lo, mut hi, flo) = (prev_x, x, prev_f);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let fm = det_shift(mid);
                if (fm > 0.0) == (flo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
    roots
}

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0.0;
    for col in 0..n {
        let minor: Vec<Vec<f64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| *v).collect())
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * cofactor_det(&minor);
    }
    det
}

/// A random correlation matrix built from `n_obs` Gaussian-ish samples of
/// `n` variables generated by a small LCG.
pub fn random_correlation(n: usize, n_obs: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let data: Vec<Vec<f64>> = (0..n_obs)
        .map(|_| {
            let common = next() - 0.5;
            (0..n).map(|_| (0..4).map(|_| next()).sum::<f64>() - 2.0 + common).collect()
        })
        .collect();
    let means: Vec<f64> = (0..n).map(|j| data.iter().map(|r| r[j]).sum::<f64>() / n_obs as f64).collect();
    let mut cov = vec![vec![0.0; n]; n];
    for row in &data {
        for i in 0..n {
            for j in 0..n {
                cov[i][j] += (row[i] - means[i]) * (row[j] - means[j]);
            }
        }
    }
    let sd: Vec<f64> = (0..n).map(|i| cov[i][i].sqrt()).collect();
    let mut r = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            r[i][j] = if i == j { 1.0 } else { cov[i][j] / (sd[i] * sd[j]) };
        }
    }
    r
}
