//! The measurement chain: document matrices → three rotated components →
//! binned trivariate distribution → μ*, interaction information and
//! redundancy for words, authors and their combination.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{self, CorpusError, Document, MatrixKind, Tokenizer};
use crate::infotheory::{Distribution3, EntropyReport, InfoError, IpfConfig};
use crate::linalg::{self, Basis, LinalgError, LoadingsMatrix};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const ROTATION_METHOD: &str = "varimax (Kaiser normalization)";

/// Number of bins per component.
pub const BINS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("{set}: {source}")]
    Corpus { set: MatrixKind, source: CorpusError },
    #[error("{set}: {source}")]
    Linalg { set: MatrixKind, source: LinalgError },
    #[error("{set}: {source}")]
    Info { set: MatrixKind, source: InfoError },
    #[error("binning needs exactly 3 components, got {0}")]
    ComponentCount(usize),
    #[error("invalid binning policy: {0}")]
    InvalidPolicy(String),
}

/// How one rotated loading is mapped onto a bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum BinningPolicy {
    /// `< -tau` → 0, `[-tau, tau]` → 1, `> tau` → 2.
    SignTernary { tau: f64 },
}

impl Default for BinningPolicy {
    fn default() -> Self {
        BinningPolicy::SignTernary { tau: 0.1 }
    }
}

impl BinningPolicy {
    pub fn sign_ternary(tau: f64) -> Result<Self, PipelineError> {
        let policy = BinningPolicy::SignTernary { tau };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        match *self {
            BinningPolicy::SignTernary { tau } if !(tau.is_finite() && tau > 0.0) => {
                Err(PipelineError::InvalidPolicy(format!("tau must be positive, got {tau}")))
            }
            _ => Ok(()),
        }
    }

    pub fn bin(&self, loading: f64) -> usize {
        match *self {
            BinningPolicy::SignTernary { tau } => {
                if loading < -tau {
                    0
                } else if loading > tau {
                    2
                } else {
                    1
                }
            }
        }
    }
}

/// Distribution of variables over the 3×3×3 bin cells.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedLoadings {
    pub distribution: Distribution3,
    /// Variables per cell, in the distribution's index order.
    pub cell_counts: Vec<u64>,
    /// All variables share one cell; every entropy is then zero.
    pub degenerate: bool,
}

/// Bins each variable's three loadings and normalizes the cell counts.
pub fn loadings_to_distribution(
    l: &LoadingsMatrix,
    policy: BinningPolicy,
) -> Result<BinnedLoadings, PipelineError> {
    policy.validate()?;
    if l.n_factors() != 3 {
        return Err(PipelineError::ComponentCount(l.n_factors()));
    }
    let cells = (0..l.loadings.rows()).map(|i| {
        let row = l.loadings.row(i);
        [policy.bin(row[0]), policy.bin(row[1]), policy.bin(row[2])]
    });
    let distribution = Distribution3::from_observations([BINS; 3], cells)
        .map_err(|source| PipelineError::Info { set: MatrixKind::Combined, source })?;
    let total = l.loadings.rows() as f64;
    let cell_counts: Vec<u64> = distribution.probs().iter().map(|p| (p * total).round() as u64).collect();
    let degenerate = distribution.support_size() == 1;
    if degenerate {
        log::warn!("all {} variables fall into one bin cell", l.loadings.rows());
    }
    Ok(BinnedLoadings { distribution, cell_counts, degenerate })
}

/// Settings for [`measure`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Words are kept when they occur more than this many times.
    pub word_threshold: u64,
    /// Authors are kept when they occur more than this many times.
    pub author_threshold: u64,
    pub components: usize,
    pub basis: Basis,
    pub binning: BinningPolicy,
    pub ipf: IpfConfig,
    pub varimax_tol: f64,
    pub varimax_max_iter: usize,
    /// Stopword list; `None` uses the built-in default.
    pub stopwords: Option<Vec<String>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            word_threshold: 2,
            author_threshold: 1,
            components: 3,
            basis: Basis::Correlation,
            binning: BinningPolicy::default(),
            ipf: IpfConfig::default(),
            varimax_tol: 1e-12,
            varimax_max_iter: 1000,
            stopwords: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub word_threshold: u64,
    pub author_threshold: u64,
    pub components: usize,
    pub basis: Basis,
    pub rotation: &'static str,
    pub varimax_tol: f64,
    pub varimax_max_iter: usize,
    pub binning: BinningPolicy,
    pub ipf: IpfConfig,
    pub documents: usize,
    pub stopwords: String,
}

/// Results for one variable set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableSetReport {
    /// Variables surviving the occurrence threshold.
    pub variables: usize,
    /// Constant columns removed before factoring.
    pub dropped_constant: Vec<String>,
    /// Variables entering the factor analysis.
    pub analysed: usize,
    pub eigenvalues: Vec<f64>,
    pub varimax_sweeps: usize,
    pub cell_counts: Vec<u64>,
    pub degenerate: bool,
    pub interpretation: &'static str,
    pub entropy: EntropyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructurationReport {
    pub schema_version: u32,
    pub metadata: ReportMetadata,
    pub words: VariableSetReport,
    pub authors: VariableSetReport,
    pub combined: VariableSetReport,
}

impl StructurationReport {
    pub fn get(&self, set: MatrixKind) -> &VariableSetReport {
        match set {
            MatrixKind::Words => &self.words,
            MatrixKind::Authors => &self.authors,
            MatrixKind::Combined => &self.combined,
        }
    }
}

/// Reading of the sign of μ*.
pub fn interpret_mu_star(mu_star: f64) -> &'static str {
    if mu_star < 0.0 {
        "uncertainty reduced by next-order organization"
    } else if mu_star > 0.0 {
        "uncertainty increased: historicity prevails"
    } else {
        "no net three-way effect"
    }
}

/// Runs the whole chain for words, authors, and both combined.
pub fn measure(corpus: &[Document], config: &PipelineConfig) -> Result<StructurationReport, PipelineError> {
    config.binning.validate()?;
    if config.components != 3 {
        return Err(PipelineError::ComponentCount(config.components));
    }
    let tokenizer = match &config.stopwords {
        Some(words) => Tokenizer::with_stopwords(words),
        None => Tokenizer::default(),
    };
    let build = |kind, threshold| {
        corpus::build_matrix_with(corpus, kind, threshold, &tokenizer)
            .map_err(|source| PipelineError::Corpus { set: kind, source })
    };
    let words = build(MatrixKind::Words, config.word_threshold)?;
    let authors = build(MatrixKind::Authors, config.author_threshold)?;
    let combined = corpus::combine(&words, &authors)
        .map_err(|source| PipelineError::Corpus { set: MatrixKind::Combined, source })?;

    let metadata = ReportMetadata {
        word_threshold: config.word_threshold,
        author_threshold: config.author_threshold,
        components: config.components,
        basis: config.basis,
        rotation: ROTATION_METHOD,
        varimax_tol: config.varimax_tol,
        varimax_max_iter: config.varimax_max_iter,
        binning: config.binning,
        ipf: config.ipf,
        documents: corpus.len(),
        stopwords: match &config.stopwords {
            Some(words) => words.join(" "),
            None => "default".to_string(),
        },
    };
    Ok(StructurationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        metadata,
        words: analyse(&words, config)?,
        authors: analyse(&authors, config)?,
        combined: analyse(&combined, config)?,
    })
}

fn analyse(m: &corpus::DocMatrix, config: &PipelineConfig) -> Result<VariableSetReport, PipelineError> {
    let set = m.kind();
    let la = |source| PipelineError::Linalg { set, source };
    let (assoc, dropped) = match config.basis {
        Basis::Correlation => linalg::correlation_dropping_constant(m),
        Basis::Covariance => linalg::covariance_dropping_constant(m),
    }
    .map_err(la)?;
    let eigen = linalg::eigh(&assoc.r).map_err(la)?;
    let unrotated = linalg::principal_components(&assoc, config.components).map_err(la)?;
    let fit = linalg::varimax(&unrotated, config.varimax_tol, config.varimax_max_iter).map_err(la)?;
    let binned = loadings_to_distribution(&fit.loadings, config.binning).map_err(|e| match e {
        PipelineError::Info { source, .. } => PipelineError::Info { set, source },
        other => other,
    })?;
    let entropy = EntropyReport::compute(&binned.distribution, config.ipf)
        .map_err(|source| PipelineError::Info { set, source })?;
    Ok(VariableSetReport {
        variables: m.n_vars(),
        dropped_constant: dropped,
        analysed: assoc.labels.len(),
        eigenvalues: eigen.values[..config.components].to_vec(),
        varimax_sweeps: fit.sweeps,
        cell_counts: binned.cell_counts,
        degenerate: binned.degenerate,
        interpretation: interpret_mu_star(entropy.mu_star),
        entropy,
    })
}
