//! Bibliographic records and thresholded document-by-variable matrices.
//!
//! Titles are tokenized into words and author names are normalized to a
//! canonical `last, f.` form. A variable survives thresholding when its
//! corpus-wide count is strictly greater than the threshold, so a threshold
//! of 2 keeps words occurring more than twice.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("no {kind} variable occurs more than {threshold} times")]
    EmptyAfterThreshold { kind: MatrixKind, threshold: u64 },
    #[error("matrices cover different documents")]
    DocMismatch,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("malformed corpus file: {0}")]
    Format(String),
}

/// A bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    /// Normalized author names (see [`normalize_author`]).
    pub authors: Vec<String>,
    pub year: Option<i32>,
}

impl Document {
    /// Builds a document, normalizing the raw author names.
    pub fn new<S: AsRef<str>>(id: &str, title: &str, authors: &[S], year: Option<i32>) -> Self {
        Document {
            id: id.to_string(),
            title: title.to_string(),
            authors: authors.iter().map(|a| normalize_author(a.as_ref())).filter(|a| !a.is_empty()).collect(),
            year,
        }
    }
}

/// English function words removed from titles by default.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "against", "all", "also", "among", "an", "and", "any", "are", "as", "at",
    "be", "because", "been", "before", "being", "between", "both", "but", "by", "can", "could", "did", "do",
    "does", "doing", "down", "during", "each", "either", "few", "for", "from", "further", "had", "has",
    "have", "having", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "more", "most", "no",
    "nor", "not", "of", "off", "on", "once", "only", "or", "other", "our", "out", "over", "own", "s", "same",
    "should", "so", "some", "such", "t", "than", "that", "the", "their", "them", "then", "there", "these",
    "they", "this", "those", "through", "to", "too", "under", "until", "up", "upon", "us", "very", "via",
    "was", "we", "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "within", "without", "would", "you", "your",
];

/// Title tokenizer.
///
/// Text is lowercased; every character that is neither alphanumeric, a
/// hyphen nor whitespace acts as a separator; leading and trailing hyphens
/// are trimmed; stopwords are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tokenizer {
    stopwords: BTreeSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer::with_stopwords(DEFAULT_STOPWORDS.iter().copied())
    }
}

impl Tokenizer {
    pub fn with_stopwords<I, S>(stopwords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Tokenizer { stopwords: stopwords.into_iter().map(|s| s.as_ref().to_lowercase()).collect() }
    }

    pub fn stopwords(&self) -> impl Iterator<Item = &str> {
        self.stopwords.iter().map(String::as_str)
    }

    pub fn tokenize(&self, title: &str) -> Vec<String> {
        title
            .to_lowercase()
            .split(|c: char| !(c.is_alphanumeric() || c == '-'))
            .map(|tok| tok.trim_matches('-'))
            .filter(|tok| !tok.is_empty() && !self.stopwords.contains(*tok))
            .map(str::to_string)
            .collect()
    }
}

/// Tokenizes with the default stopword list.
pub fn tokenize_title(title: &str) -> Vec<String> {
    Tokenizer::default().tokenize(title)
}

/// Canonical author form `last, f.`: trimmed, whitespace collapsed, case
/// folded, keeping only the first given-name initial.
///
/// `"Granovetter, Mark"`, `"M. Granovetter"` and `"mark  granovetter"` all
/// become `"granovetter, m."`. A single token is kept as is.
pub fn normalize_author(raw: &str) -> String {
    let folded = raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    let (last, given) = match folded.split_once(',') {
        Some((last, given)) => (last.trim().to_string(), given.trim().to_string()),
        None => match folded.rsplit_once(' ') {
            Some((given, last)) => (last.to_string(), given.to_string()),
            None => return folded,
        },
    };
    match given.chars().find(|c| c.is_alphanumeric()) {
        Some(initial) if !last.is_empty() => format!("{last}, {initial}."),
        _ if !last.is_empty() => last,
        _ => given,
    }
}

#[derive(Debug, Deserialize)]
struct CorpusRow {
    id: String,
    title: String,
    #[serde(default)]
    authors: String,
    #[serde(default)]
    year: Option<String>,
}

/// Reads `id,title,authors,year` with `;`-separated authors.
pub fn read_corpus_csv<R: Read>(input: R) -> Result<Vec<Document>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (n, row) in reader.deserialize::<CorpusRow>().enumerate() {
        let row = row.map_err(|e| CorpusError::Format(e.to_string()))?;
        let year =
            match row.year.as_deref().map(str::trim) {
                None | Some("") => None,
                Some(y) => Some(y.parse::<i32>().map_err(|_| {
                    CorpusError::Format(format!("row {}: year {y:?} is not an integer", n + 2))
                })?),
            };
        if !seen.insert(row.id.clone()) {
            return Err(CorpusError::DuplicateId(row.id));
        }
        let authors: Vec<&str> = row.authors.split(';').collect();
        docs.push(Document::new(&row.id, &row.title, &authors, year));
    }
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(docs)
}

/// Writes a corpus back in the `id,title,authors,year` layout.
pub fn write_corpus_csv<W: Write>(docs: &[Document], out: W) -> Result<(), CorpusError> {
    let mut writer = csv::Writer::from_writer(out);
    let fmt = |e: csv::Error| CorpusError::Format(e.to_string());
    writer.write_record(["id", "title", "authors", "year"]).map_err(fmt)?;
    for doc in docs {
        writer
            .write_record([
                doc.id.as_str(),
                doc.title.as_str(),
                &doc.authors.join(";"),
                &doc.year.map(|y| y.to_string()).unwrap_or_default(),
            ])
            .map_err(fmt)?;
    }
    writer.flush().map_err(|e| CorpusError::Format(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Words,
    Authors,
    Combined,
}

impl MatrixKind {
    fn prefix(self) -> &'static str {
        match self {
            MatrixKind::Words => "word",
            MatrixKind::Authors => "author",
            MatrixKind::Combined => "combined",
        }
    }
}

impl std::fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatrixKind::Words => "words",
            MatrixKind::Authors => "authors",
            MatrixKind::Combined => "combined",
        })
    }
}

/// Documents × variables occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DocMatrix {
    doc_ids: Vec<String>,
    variables: Vec<String>,
    /// Row-major, one row per document.
    cells: Vec<u32>,
    kind: MatrixKind,
}

impl DocMatrix {
    pub fn new(
        doc_ids: Vec<String>,
        variables: Vec<String>,
        cells: Vec<u32>,
        kind: MatrixKind,
    ) -> Result<Self, CorpusError> {
        if cells.len() != doc_ids.len() * variables.len() {
            return Err(CorpusError::Shape(format!(
                "{} cells for {} documents x {} variables",
                cells.len(),
                doc_ids.len(),
                variables.len()
            )));
        }
        Ok(DocMatrix { doc_ids, variables, cells, kind })
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn get(&self, doc: usize, var: usize) -> u32 {
        self.cells[doc * self.variables.len() + var]
    }

    pub fn column(&self, var: usize) -> impl Iterator<Item = u32> + '_ {
        (0..self.n_docs()).map(move |d| self.get(d, var))
    }

    pub fn column_total(&self, var: usize) -> u64 {
        self.column(var).map(u64::from).sum()
    }

    /// Writes the matrix with a label row (`id`, variables...) and one row
    /// per document.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CorpusError> {
        let fmt = |e: csv::Error| CorpusError::Format(e.to_string());
        let mut writer = csv::Writer::from_writer(out);
        writer
            .write_record(std::iter::once("id").chain(self.variables.iter().map(String::as_str)))
            .map_err(fmt)?;
        for (d, id) in self.doc_ids.iter().enumerate() {
            let row = (0..self.n_vars()).map(|v| self.get(d, v).to_string());
            writer.write_record(std::iter::once(id.clone()).chain(row)).map_err(fmt)?;
        }
        writer.flush().map_err(|e| CorpusError::Format(e.to_string()))
    }
}

/// Counts words or authors per document and keeps the variables whose
/// corpus-wide total exceeds `threshold`, ordered by descending total with
/// ties broken alphabetically.
pub fn build_matrix(corpus: &[Document], kind: MatrixKind, threshold: u64) -> Result<DocMatrix, CorpusError> {
    build_matrix_with(corpus, kind, threshold, &Tokenizer::default())
}

pub fn build_matrix_with(
    corpus: &[Document],
    kind: MatrixKind,
    threshold: u64,
    tokenizer: &Tokenizer,
) -> Result<DocMatrix, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let per_doc: Vec<BTreeMap<String, u32>> = corpus
        .iter()
        .map(|doc| {
            let items = match kind {
                MatrixKind::Words => tokenizer.tokenize(&doc.title),
                MatrixKind::Authors => doc.authors.clone(),
                MatrixKind::Combined => {
                    return Err(CorpusError::Shape("combined matrices are built with `combine`".into()))
                }
            };
            let mut counts = BTreeMap::new();
            for item in items {
                *counts.entry(item).or_insert(0u32) += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_, _>>()?;

    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for counts in &per_doc {
        for (item, &c) in counts {
            *totals.entry(item.as_str()).or_insert(0) += u64::from(c);
        }
    }
    let mut kept: Vec<(&str, u64)> = totals.into_iter().filter(|&(_, t)| t > threshold).collect();
    if kept.is_empty() {
        return Err(CorpusError::EmptyAfterThreshold { kind, threshold });
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

    let variables: Vec<String> = kept.iter().map(|(v, _)| v.to_string()).collect();
    let mut cells = Vec::with_capacity(corpus.len() * variables.len());
    for counts in &per_doc {
        cells.extend(variables.iter().map(|v| counts.get(v).copied().unwrap_or(0)));
    }
    DocMatrix::new(corpus.iter().map(|d| d.id.clone()).collect(), variables, cells, kind)
}

/// Column-wise concatenation over identical documents. Labels are prefixed
/// with their source kind (`word:`, `author:`) so the two sets cannot
/// collide.
pub fn combine(m1: &DocMatrix, m2: &DocMatrix) -> Result<DocMatrix, CorpusError> {
    if m1.doc_ids != m2.doc_ids {
        return Err(CorpusError::DocMismatch);
    }
    let label = |m: &DocMatrix, v: &String| match m.kind {
        MatrixKind::Combined => v.clone(),
        kind => format!("{}:{v}", kind.prefix()),
    };
    let variables: Vec<String> =
        m1.variables.iter().map(|v| label(m1, v)).chain(m2.variables.iter().map(|v| label(m2, v))).collect();
    let mut cells = Vec::with_capacity(m1.n_docs() * variables.len());
    for d in 0..m1.n_docs() {
        cells.extend((0..m1.n_vars()).map(|v| m1.get(d, v)));
        cells.extend((0..m2.n_vars()).map(|v| m2.get(d, v)));
    }
    DocMatrix::new(m1.doc_ids.clone(), variables, cells, MatrixKind::Combined)
}
