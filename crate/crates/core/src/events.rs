//! Novelty memory, event classification, the three score formulas, and
//! per-interval ranking.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::extract::TermSets;
use crate::influence::PhraseWeights;

/// Classification of a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    JustTrendy,
    NovelAndTrendy,
    FirstStory,
    NotEvent,
}

/// Growing set of entity-only and common tokens from every previously
/// processed cluster, across all intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NoveltyMemory {
    tokens: BTreeSet<String>,
}

impl NoveltyMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(token)
    }

    /// Absorb a cluster's entity-only and common tokens. Called for every
    /// cluster, event or not, so repeated chatter stops looking novel.
    pub fn update(&mut self, sets: &TermSets) {
        self.tokens.extend(sets.entity_only.iter().cloned());
        self.tokens.extend(sets.common.iter().cloned());
    }

    pub fn tokens(&self) -> &BTreeSet<String> {
        &self.tokens
    }
}

/// Detection thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    /// Similarity at or above this marks a cluster as previously seen.
    pub cosine_thresh: f64,
    /// User-supplied tweet count for an event to qualify as trendy.
    pub tweet_thresh: usize,
    /// Minimum cluster size to count as any event at all.
    pub min_event_tweets: usize,
    /// The trendy heuristic requires |common| > ratio · |entity set|.
    pub common_to_entity_ratio: f64,
    /// Compare |common| against the full entity set instead of the
    /// entity-only partition.
    pub ratio_uses_full_entity_set: bool,
}

impl Default for DetectionParams {
    fn default() -> Self {
        Self {
            cosine_thresh: 0.5,
            tweet_thresh: 10,
            min_event_tweets: 3,
            common_to_entity_ratio: 0.20,
            ratio_uses_full_entity_set: false,
        }
    }
}

/// Cosine similarity of the binary indicator vectors of the cluster's token
/// set and the memory: `|A ∩ B| / sqrt(|A| · |B|)`. Zero when either side is
/// empty.
pub fn novelty_similarity(cluster_tokens: &BTreeSet<String>, memory: &NoveltyMemory) -> f64 {
    if cluster_tokens.is_empty() || memory.is_empty() {
        return 0.0;
    }
    let shared = cluster_tokens
        .iter()
        .filter(|token| memory.contains(token))
        .count();
    shared as f64 / ((cluster_tokens.len() * memory.len()) as f64).sqrt()
}

/// Decide the event type of one cluster.
///
/// A similar cluster (similarity at or above the threshold, and not the very
/// first cluster ever, which has nothing to compare against) is just trendy
/// when it is both big enough and topically focused; otherwise it is no
/// event. A dissimilar cluster needs `min_event_tweets` to count at all, and
/// `tweet_thresh` decides between novel-and-trendy and first story.
pub fn classify_event(
    tweet_count: usize,
    sim: f64,
    sets: &TermSets,
    params: &DetectionParams,
    is_first_cluster_ever: bool,
) -> EventType {
    if sim >= params.cosine_thresh && !is_first_cluster_ever {
        let entity_size = if params.ratio_uses_full_entity_set {
            sets.entity_terms.len()
        } else {
            sets.entity_only.len()
        };
        let focused = sets.common.len() as f64 > params.common_to_entity_ratio * entity_size as f64;
        if tweet_count >= params.tweet_thresh && focused {
            EventType::JustTrendy
        } else {
            EventType::NotEvent
        }
    } else if tweet_count < params.min_event_tweets {
        EventType::NotEvent
    } else if tweet_count >= params.tweet_thresh {
        EventType::NovelAndTrendy
    } else {
        EventType::FirstStory
    }
}

/// The three score components of an event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventScores {
    pub entity_score: f64,
    pub influence_score: f64,
    pub total_score: f64,
}

/// Score a classified event.
///
/// The scoring token set depends on the type: `common` for just-trendy,
/// `keyword_only ∪ common` for novel-and-trendy, and
/// `(union_all − keyword_only) ∪ common` for a first story. The summed token
/// scores are multiplied by the tweet count for trendy types and by
/// `tweet_thresh` for a first story, so a first story scores at least like a
/// trendy event at the threshold. Each distinct noun phrase of the cluster
/// adds its influence weight once; phrases without a weight contribute zero.
pub fn score_event(
    event_type: EventType,
    sets: &TermSets,
    tweet_count: usize,
    phrase_weights: &PhraseWeights,
    event_phrases: &BTreeSet<String>,
    params: &DetectionParams,
) -> EventScores {
    debug_assert!(
        event_type != EventType::NotEvent,
        "not-events are not scored"
    );
    let scoring_set: BTreeSet<&String> = match event_type {
        EventType::JustTrendy => sets.common.iter().collect(),
        EventType::NovelAndTrendy => sets.keyword_only.union(&sets.common).collect(),
        EventType::FirstStory => {
            let mut b: BTreeSet<&String> = sets.union_all.difference(&sets.keyword_only).collect();
            b.extend(sets.common.iter());
            b
        }
        EventType::NotEvent => BTreeSet::new(),
    };

    let multiplier = match event_type {
        EventType::FirstStory => params.tweet_thresh as f64,
        _ => tweet_count as f64,
    };

    let summed: f64 = scoring_set
        .iter()
        .map(|token| sets.token_scores.get(*token).copied().unwrap_or(0.0))
        .sum();
    let entity_score = multiplier * summed;

    let influence_score: f64 = event_phrases
        .iter()
        .map(|phrase| phrase_weights.get(phrase).unwrap_or(0.0))
        .sum();

    EventScores {
        entity_score,
        influence_score,
        total_score: entity_score + influence_score,
    }
}

/// One classified, scored, ranked cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub interval_index: usize,
    pub cluster_id: usize,
    pub event_type: EventType,
    pub tweet_count: usize,
    pub entity_score: f64,
    pub influence_score: f64,
    pub total_score: f64,
    /// 1-based rank within the interval, among events only.
    pub rank: usize,
    /// The cluster's union token set, for reporting.
    pub keywords: Vec<String>,
}

/// Order events by descending total score (ties: higher tweet count, then
/// lower cluster id) and assign ranks 1..E.
pub fn rank_events(mut events: Vec<EventRecord>) -> Vec<EventRecord> {
    events.sort_by(|a, b| {
        b.total_score
            .total_cmp(&a.total_score)
            .then_with(|| b.tweet_count.cmp(&a.tweet_count))
            .then_with(|| a.cluster_id.cmp(&b.cluster_id))
    });
    for (i, event) in events.iter_mut().enumerate() {
        event.rank = i + 1;
    }
    events
}
