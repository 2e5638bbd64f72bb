//! Per-interval user influence: min-max normalized follower counts inherited
//! by the noun phrases those users wrote.

use std::collections::BTreeMap;

use crate::ingest::Interval;

/// Noun-phrase weights for one interval, each in `[0, 1]`.
///
/// A phrase used by several users carries the highest normalized weight
/// among them.
#[derive(Debug, Clone, PartialEq)]
pub struct PhraseWeights {
    pub interval_index: usize,
    weights: BTreeMap<String, f64>,
}

impl PhraseWeights {
    pub fn get(&self, phrase: &str) -> Option<f64> {
        self.weights.get(phrase).copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(p, w)| (p.as_str(), *w))
    }
}

/// Min-max normalize follower counts over the distinct authors of an
/// interval.
///
/// An author tweeting several times counts once, at the largest follower
/// count observed. When every author has the same count the weight is 1.0
/// for all of them, so a quiet interval does not zero out the influence term.
pub fn normalize_followers(interval: &Interval) -> BTreeMap<String, f64> {
    let mut followers: BTreeMap<String, u64> = BTreeMap::new();
    for tweet in &interval.tweets {
        let entry = followers.entry(tweet.author_id.clone()).or_insert(0);
        *entry = (*entry).max(tweet.follower_count);
    }
    if followers.is_empty() {
        return BTreeMap::new();
    }

    let min = *followers.values().min().expect("non-empty");
    let max = *followers.values().max().expect("non-empty");
    followers
        .into_iter()
        .map(|(author, count)| {
            let weight = if max == min {
                1.0
            } else {
                (count - min) as f64 / (max - min) as f64
            };
            (author, weight)
        })
        .collect()
}

/// Attach to every noun phrase the maximum normalized weight among the
/// authors who used it in this interval.
pub fn build_phrase_weights(
    interval: &Interval,
    phrases_per_tweet: &BTreeMap<String, Vec<String>>,
) -> PhraseWeights {
    let author_weights = normalize_followers(interval);
    let mut weights: BTreeMap<String, f64> = BTreeMap::new();
    for tweet in &interval.tweets {
        let weight = author_weights.get(&tweet.author_id).copied().unwrap_or(0.0);
        let Some(phrases) = phrases_per_tweet.get(&tweet.id) else {
            continue;
        };
        for phrase in phrases {
            let entry = weights.entry(phrase.clone()).or_insert(weight);
            *entry = entry.max(weight);
        }
    }
    PhraseWeights {
        interval_index: interval.index,
        weights,
    }
}
