//! From-scratch TFIDF vectorization with document-frequency pruning, plus
//! sparse-vector geometry (dot product, cosine, euclidean distance).

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::preprocess::TokenDoc;

/// TFIDF pruning parameters; n-gram range is fixed at unigrams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfidfParams {
    /// Terms with df/N above this fraction are pruned (boundary kept).
    pub max_df: f64,
    /// Terms with df/N below this fraction are pruned (boundary kept).
    pub min_df: f64,
    /// Cap on vocabulary size; highest-df terms win, ties lexicographic.
    pub max_features: usize,
}

impl Default for TfidfParams {
    fn default() -> Self {
        Self {
            max_df: 0.90,
            min_df: 0.01,
            max_features: 200_000,
        }
    }
}

/// Retained unigram terms with dense column indices and their document
/// frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: BTreeMap<String, usize>,
    document_frequencies: Vec<usize>,
    n_docs: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.terms.get(term).copied()
    }

    pub fn document_frequency(&self, term: &str) -> Option<usize> {
        self.column(term).map(|c| self.document_frequencies[c])
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, usize)> {
        self.terms.iter().map(|(t, c)| (t.as_str(), *c))
    }

    /// Smoothed inverse document frequency for a column:
    /// `ln((1 + N) / (1 + df)) + 1`.
    pub fn idf(&self, column: usize) -> f64 {
        let df = self.document_frequencies[column];
        ((1.0 + self.n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
    }
}

/// A sparse row: `(column, weight)` entries sorted by column.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|(col, _)| *col);
        Self { entries }
    }

    pub fn from_dense(values: &[f64]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, *v))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ca, va) = self.entries[i];
            let (cb, vb) = other.entries[j];
            match ca.cmp(&cb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += va * vb;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn l2_normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for (_, v) in &mut self.entries {
                *v /= norm;
            }
        }
    }

    pub fn euclidean_distance(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            match (self.entries.get(i), other.entries.get(j)) {
                (Some(&(ca, va)), Some(&(cb, vb))) => match ca.cmp(&cb) {
                    std::cmp::Ordering::Less => {
                        sum += va * va;
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        sum += vb * vb;
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        let d = va - vb;
                        sum += d * d;
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&(_, va)), None) => {
                    sum += va * va;
                    i += 1;
                }
                (None, Some(&(_, vb))) => {
                    sum += vb * vb;
                    j += 1;
                }
                (None, None) => break,
            }
        }
        sum.sqrt()
    }
}

/// One L2-normalized sparse row per input document.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfMatrix {
    pub rows: Vec<SparseVector>,
    pub n_columns: usize,
}

/// Build the pruned unigram vocabulary for one interval's documents.
///
/// Returns [`Error::EmptyVocabulary`] when every term is pruned; the caller
/// skips the interval.
pub fn build_vocabulary(docs: &[TokenDoc], params: &TfidfParams) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot build a vocabulary from zero documents".to_owned(),
        ));
    }
    let n = docs.len();
    let mut df: HashMap<&str, usize> = HashMap::new();
    for doc in docs {
        let unique: HashSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for term in unique {
            *df.entry(term).or_insert(0) += 1;
        }
    }

    let mut retained: Vec<(&str, usize)> = df
        .into_iter()
        .filter(|(_, count)| {
            let fraction = *count as f64 / n as f64;
            fraction <= params.max_df && fraction >= params.min_df
        })
        .collect();

    if retained.len() > params.max_features {
        retained.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        retained.truncate(params.max_features);
    }
    if retained.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    retained.sort_by(|a, b| a.0.cmp(b.0));
    let mut terms = BTreeMap::new();
    let mut document_frequencies = Vec::with_capacity(retained.len());
    for (column, (term, count)) in retained.into_iter().enumerate() {
        terms.insert(term.to_owned(), column);
        document_frequencies.push(count);
    }

    Ok(Vocabulary {
        terms,
        document_frequencies,
        n_docs: n,
    })
}

/// Weight each document over the vocabulary: raw term count times smoothed
/// idf, then L2 row normalization. Documents with no in-vocabulary terms
/// become zero rows.
pub fn tfidf_transform(docs: &[TokenDoc], vocab: &Vocabulary) -> TfidfMatrix {
    let rows = docs
        .iter()
        .map(|doc| {
            let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
            for token in &doc.tokens {
                if let Some(column) = vocab.column(token) {
                    *counts.entry(column).or_insert(0.0) += 1.0;
                }
            }
            let mut row = SparseVector::new(
                counts
                    .into_iter()
                    .map(|(column, tf)| (column, tf * vocab.idf(column)))
                    .collect(),
            );
            row.l2_normalize();
            row
        })
        .collect();
    TfidfMatrix {
        rows,
        n_columns: vocab.len(),
    }
}

/// Cosine similarity; zero when either vector has zero norm.
pub fn cosine_sim(a: &SparseVector, b: &SparseVector) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.dot(b) / (na * nb)
}
