use std::collections::HashMap;
use std::io::{Read, Write};

use serde::Serialize;

use super::InfoError;

/// Tolerance on the total mass of a probability table.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// One of the three axes of a trivariate table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A pair of axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pair {
    XY,
    XZ,
    YZ,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::XY, Pair::XZ, Pair::YZ];

    pub(crate) fn axes(self) -> (usize, usize) {
        match self {
            Pair::XY => (0, 1),
            Pair::XZ => (0, 2),
            Pair::YZ => (1, 2),
        }
    }
}

/// A normalized joint distribution over three finite alphabets, stored
/// densely in `(i, j, k)` row-major order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution3 {
    dims: [usize; 3],
    p: Vec<f64>,
}

impl Distribution3 {
    pub fn new(dims: [usize; 3], p: Vec<f64>) -> Result<Self, InfoError> {
        if dims.contains(&0) {
            return Err(InfoError::EmptyAxis);
        }
        let cells = dims[0] * dims[1] * dims[2];
        if p.len() != cells {
            return Err(InfoError::ShapeMismatch { expected: cells, found: p.len() });
        }
        if let Some(&bad) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(InfoError::NegativeProbability(bad));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(InfoError::NotNormalized { sum: total });
        }
        Ok(Distribution3 { dims, p })
    }

    /// Normalizes non-negative integer counts.
    pub fn from_counts(dims: [usize; 3], counts: &[u64]) -> Result<Self, InfoError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(InfoError::EmptyTable);
        }
        let total = total as f64;
        Self::new(dims, counts.iter().map(|&c| c as f64 / total).collect())
    }

    /// Builds the empirical distribution of `(x, y, z)` observations.
    pub fn from_observations(
        dims: [usize; 3],
        observations: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self, InfoError> {
        let mut counts = vec![0u64; dims[0] * dims[1] * dims[2]];
        for [i, j, k] in observations {
            if i >= dims[0] || j >= dims[1] || k >= dims[2] {
                return Err(InfoError::IndexOutOfRange([i, j, k]));
            }
            counts[(i * dims[1] + j) * dims[2] + k] += 1;
        }
        Self::from_counts(dims, &counts)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.p[self.index(i, j, k)]
    }

    pub fn marginal(&self, axis: Axis) -> Vec<f64> {
        let a = axis as usize;
        let mut out = vec![0.0; self.dims[a]];
        self.for_each_cell(|idx, v| out[idx[a]] += v);
        out
    }

    /// Bivariate marginal, row-major over the pair's two axes.
    pub fn marginal_pair(&self, pair: Pair) -> Vec<f64> {
        let (a, b) = pair.axes();
        let nb = self.dims[b];
        let mut out = vec![0.0; self.dims[a] * nb];
        self.for_each_cell(|idx, v| out[idx[a] * nb + idx[b]] += v);
        out
    }

    /// Reorders axes: axis `n` of the result is axis `order[n]` of `self`.
    pub fn permute_axes(&self, order: [usize; 3]) -> Self {
        let mut sorted = order;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2], "order must be a permutation of 0..3");
        let dims = [self.dims[order[0]], self.dims[order[1]], self.dims[order[2]]];
        let mut p = vec![0.0; self.p.len()];
        self.for_each_cell(|idx, v| {
            let (i, j, k) = (idx[order[0]], idx[order[1]], idx[order[2]]);
            p[(i * dims[1] + j) * dims[2] + k] = v;
        });
        Distribution3 { dims, p }
    }

    /// Number of cells with positive mass.
    pub fn support_size(&self) -> usize {
        self.p.iter().filter(|&&v| v > 0.0).count()
    }

    pub(crate) fn for_each_cell(&self, mut f: impl FnMut([usize; 3], f64)) {
        let [nx, ny, nz] = self.dims;
        let mut n = 0;
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    f([i, j, k], self.p[n]);
                    n += 1;
                }
            }
        }
    }

    /// Wraps an already normalized table produced internally.
    pub(crate) fn from_raw(dims: [usize; 3], p: Vec<f64>) -> Self {
        Distribution3 { dims, p }
    }
}

/// Integer counts over three labelled categorical variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyTable {
    labels: [Vec<String>; 3],
    counts: Vec<u64>,
}

impl ContingencyTable {
    pub fn new(labels: [Vec<String>; 3], counts: Vec<u64>) -> Result<Self, InfoError> {
        let cells: usize = labels.iter().map(Vec::len).product();
        if labels.iter().any(Vec::is_empty) {
            return Err(InfoError::EmptyAxis);
        }
        if counts.len() != cells {
            return Err(InfoError::ShapeMismatch { expected: cells, found: counts.len() });
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(InfoError::EmptyTable);
        }
        Ok(ContingencyTable { labels, counts })
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.labels[0].len(), self.labels[1].len(), self.labels[2].len()]
    }

    pub fn labels(&self) -> &[Vec<String>; 3] {
        &self.labels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_distribution(&self) -> Distribution3 {
        Distribution3::from_counts(self.dims(), &self.counts).expect("validated table has positive total")
    }

    /// Reads `x,y,z,count` rows. Labels are ordered by first appearance and
    /// repeated `(x, y, z)` rows accumulate.
    pub fn read_csv<R: Read>(input: R) -> Result<Self, InfoError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers = reader.headers().map_err(csv_error)?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "y", "z", "count"] {
            return Err(InfoError::Format(format!(
                "expected header x,y,z,count, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut labels: [Vec<String>; 3] = Default::default();
        let mut lookup: [HashMap<String, usize>; 3] = Default::default();
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(csv_error)?;
            let mut idx = [0usize; 3];
            for axis in 0..3 {
                let label = &record[axis];
                idx[axis] = *lookup[axis].entry(label.to_string()).or_insert_with(|| {
                    labels[axis].push(label.to_string());
                    labels[axis].len() - 1
                });
            }
            let count: u64 = record[3].parse().map_err(|_| {
                InfoError::Format(format!(
                    "row {}: count {:?} is not a non-negative integer",
                    line + 2,
                    &record[3]
                ))
            })?;
            rows.push((idx, count));
        }
        if labels.iter().any(Vec::is_empty) {
            return Err(InfoError::EmptyTable);
        }
        let dims = [labels[0].len(), labels[1].len(), labels[2].len()];
        let mut counts = vec![0u64; dims[0] * dims[1] * dims[2]];
        for ([i, j, k], count) in rows {
            counts[(i * dims[1] + j) * dims[2] + k] += count;
        }
        Self::new(labels, counts)
    }

    /// Writes `x,y,z,count` for every non-empty cell in index order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), InfoError> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["x", "y", "z", "count"]).map_err(csv_error)?;
        let [_, ny, nz] = self.dims();
        for (n, &count) in self.counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let (i, j, k) = (n / (ny * nz), (n / nz) % ny, n % nz);
            writer
                .write_record([
                    self.labels[0][i].as_str(),
                    self.labels[1][j].as_str(),
                    self.labels[2][k].as_str(),
                    &count.to_string(),
                ])
                .map_err(csv_error)?;
        }
        writer.flush().map_err(|e| InfoError::Format(e.to_string()))?;
        Ok(())
    }
}

fn csv_error(err: csv::Error) -> InfoError {
    InfoError::Format(err.to_string())
}
