//! Keyword scoring over an undirected, unweighted co-occurrence graph.

use std::collections::BTreeSet;

use super::{ScoredTerm, TermKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextRankParams {
    /// Tokens within this many positions of each other co-occur.
    pub window: usize,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TextRankParams {
    fn default() -> Self {
        Self {
            window: 2,
            damping: 0.85,
            tol: 1e-6,
            max_iter: 100,
        }
    }
}

/// Rank every distinct token of a cleaned token sequence.
///
/// Vertices are distinct tokens; an undirected, unweighted edge joins two
/// distinct tokens appearing within `window` positions of each other. Scores
/// iterate `S(v) = (1 - d) + d * Σ S(u) / deg(u)` over the neighbors of `v`
/// from a uniform start until the largest per-vertex change drops below
/// `tol` or `max_iter` passes. Results come back sorted by descending score,
/// ties broken lexicographically.
pub fn textrank_keywords(tokens: &[String], params: &TextRankParams) -> Vec<ScoredTerm> {
    if tokens.is_empty() {
        return Vec::new();
    }

    // Vertex ids in first-appearance order.
    let mut vertex_of: Vec<(&str, usize)> = Vec::new();
    let mut vertex_ids = Vec::with_capacity(tokens.len());
    for token in tokens {
        let id = match vertex_of.iter().find(|(t, _)| *t == token.as_str()) {
            Some((_, id)) => *id,
            None => {
                let id = vertex_of.len();
                vertex_of.push((token.as_str(), id));
                id
            }
        };
        vertex_ids.push(id);
    }
    let n = vertex_of.len();

    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, &a) in vertex_ids.iter().enumerate() {
        for offset in 1..params.window {
            let Some(&b) = vertex_ids.get(i + offset) else {
                break;
            };
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
    }

    let mut scores = vec![1.0f64; n];
    for _ in 0..params.max_iter {
        let mut next = vec![0.0f64; n];
        for (v, neighbors) in adjacency.iter().enumerate() {
            let mut incoming = 0.0;
            for &u in neighbors {
                incoming += scores[u] / adjacency[u].len() as f64;
            }
            next[v] = (1.0 - params.damping) + params.damping * incoming;
        }
        let delta = next
            .iter()
            .zip(&scores)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        scores = next;
        if delta < params.tol {
            break;
        }
    }

    let mut ranked: Vec<ScoredTerm> = vertex_of
        .iter()
        .map(|(term, id)| ScoredTerm {
            term: (*term).to_owned(),
            raw_score: scores[*id],
            kind: TermKind::Keyword,
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.raw_score
            .total_cmp(&a.raw_score)
            .then_with(|| a.term.cmp(&b.term))
    });
    ranked
}

/// The keyword set: the top `keyword_fraction` of ranked vertices (ceiling),
/// never fewer than one when any vertex exists.
pub fn select_keywords(ranked: &[ScoredTerm], keyword_fraction: f64) -> Vec<ScoredTerm> {
    if ranked.is_empty() {
        return Vec::new();
    }
    let count = ((keyword_fraction * ranked.len() as f64).ceil() as usize).clamp(1, ranked.len());
    ranked[..count].to_vec()
}
