//! Keyword extraction, entity recognition, sigmoid score normalization, and
//! the common / keyword-only / entity-only / union token-set partition.

mod ner;
mod textrank;

pub use ner::{EntityRecognizer, Gazetteer, Recognition, RemoteNerClient, RemoteNerConfig};
pub use textrank::{select_keywords, textrank_keywords, TextRankParams};

use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    Keyword,
    Entity,
}

/// A term with its raw score: a graph score for keywords, a recognizer
/// confidence for entities.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredTerm {
    pub term: String,
    pub raw_score: f64,
    pub kind: TermKind,
}

impl ScoredTerm {
    pub fn keyword(term: impl Into<String>, score: f64) -> Self {
        Self {
            term: term.into(),
            raw_score: score,
            kind: TermKind::Keyword,
        }
    }

    pub fn entity(term: impl Into<String>, confidence: f64) -> Self {
        Self {
            term: term.into(),
            raw_score: confidence,
            kind: TermKind::Entity,
        }
    }
}

/// Logistic normalization onto (0, 1).
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// The four token sets of a cluster.
///
/// `common`, `keyword_only`, and `entity_only` are pairwise disjoint and
/// their union is `union_all`. `entity_terms` keeps the full entity set
/// before the partition, for heuristics that need it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermSets {
    /// Tokens in both sets, plus promoted high scorers from each side.
    pub common: BTreeSet<String>,
    /// Keywords not in `common`.
    pub keyword_only: BTreeSet<String>,
    /// Entities not in `common`.
    pub entity_only: BTreeSet<String>,
    /// Every keyword and entity.
    pub union_all: BTreeSet<String>,
    /// Sigmoid-normalized score per token; a token that is both keyword and
    /// entity carries the sum of its two normalized scores.
    pub token_scores: BTreeMap<String, f64>,
    /// The full entity set (N), kept whole.
    pub entity_terms: BTreeSet<String>,
}

fn top_terms(scores: &BTreeMap<String, f64>, fraction: f64) -> BTreeSet<String> {
    if scores.is_empty() || fraction <= 0.0 {
        return BTreeSet::new();
    }
    let count = (fraction * scores.len() as f64).ceil() as usize;
    let mut ranked: Vec<(&String, f64)> = scores.iter().map(|(t, s)| (t, *s)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(count)
        .map(|(t, _)| t.clone())
        .collect()
}

/// Partition keywords and entities into the common / keyword-only /
/// entity-only / union sets and score every token.
///
/// Entity surface forms are lowercased; multi-word entities stay single set
/// members, so the keyword/entity intersection happens on exact normalized
/// strings. Besides the literal intersection, the top
/// `ceil(promote_fraction · |set|)` scorers of each side are promoted into
/// `common`.
pub fn build_term_sets(
    keywords: &[ScoredTerm],
    entities: &[ScoredTerm],
    promote_fraction: f64,
) -> TermSets {
    let mut keyword_scores: BTreeMap<String, f64> = BTreeMap::new();
    for keyword in keywords {
        keyword_scores
            .entry(keyword.term.clone())
            .or_insert(keyword.raw_score);
    }
    let mut entity_scores: BTreeMap<String, f64> = BTreeMap::new();
    for entity in entities {
        entity_scores
            .entry(entity.term.to_lowercase())
            .or_insert(entity.raw_score);
    }

    let keyword_set: BTreeSet<String> = keyword_scores.keys().cloned().collect();
    let entity_set: BTreeSet<String> = entity_scores.keys().cloned().collect();

    let mut common: BTreeSet<String> = keyword_set.intersection(&entity_set).cloned().collect();
    common.extend(top_terms(&keyword_scores, promote_fraction));
    common.extend(top_terms(&entity_scores, promote_fraction));

    let keyword_only: BTreeSet<String> = keyword_set.difference(&common).cloned().collect();
    let entity_only: BTreeSet<String> = entity_set.difference(&common).cloned().collect();
    let union_all: BTreeSet<String> = keyword_set.union(&entity_set).cloned().collect();

    let mut token_scores = BTreeMap::new();
    for token in &union_all {
        let mut score = 0.0;
        if let Some(k) = keyword_scores.get(token) {
            score += sigmoid(*k);
        }
        if let Some(e) = entity_scores.get(token) {
            score += sigmoid(*e);
        }
        token_scores.insert(token.clone(), score);
    }

    TermSets {
        common,
        keyword_only,
        entity_only,
        union_all,
        token_scores,
        entity_terms: entity_set,
    }
}
