//! Whole-pipeline orchestration per interval: preprocess → influence →
//! vectorize → cluster → extract → classify → score → rank, plus the report
//! and plot-data formats.

use std::collections::{BTreeMap, BTreeSet};

use chrono::SecondsFormat;
use serde::{Deserialize, Serialize};

use crate::cluster::{build_clusters, dbscan};
use crate::config::{NerMode, RunConfig};
use crate::error::{Error, Result};
use crate::events::{
    classify_event, novelty_similarity, rank_events, score_event, EventRecord, EventType,
    NoveltyMemory,
};
use crate::extract::{
    build_term_sets, select_keywords, textrank_keywords, EntityRecognizer, RemoteNerClient,
};
use crate::influence::build_phrase_weights;
use crate::ingest::{chunk_intervals, Tweet};
use crate::preprocess::{clean_text, extract_noun_phrases, TokenDoc};
use crate::resources::Resources;
use crate::vectorize::{build_vocabulary, tfidf_transform};

/// One interval's slice of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub interval: usize,
    pub start: String,
    pub end: String,
    pub tweet_count: usize,
    pub events: Vec<EventRecord>,
}

/// The full detection report, with the resolved configuration echoed for
/// reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub config: RunConfig,
    pub warnings: Vec<String>,
    pub intervals: Vec<IntervalReport>,
}

impl DetectionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn events(&self) -> impl Iterator<Item = &EventRecord> {
        self.intervals.iter().flat_map(|iv| iv.events.iter())
    }
}

fn timestamp(dt: &chrono::DateTime<chrono::Utc>) -> String {
    dt.to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Run the full detection pipeline over parsed tweets.
pub fn run_detection(
    tweets: &[Tweet],
    config: &RunConfig,
    resources: &Resources,
) -> Result<DetectionReport> {
    config.validate()?;

    let remote_client = match (config.ner_mode, config.remote_ner_config()) {
        (NerMode::Remote, Some(remote)) => Some(RemoteNerClient::new(remote)),
        _ => None,
    };
    let recognizer = match remote_client {
        Some(client) => EntityRecognizer::with_remote(resources.gazetteer.clone(), client),
        None => EntityRecognizer::gazetteer_only(resources.gazetteer.clone()),
    };

    let intervals =
        chunk_intervals(tweets, config.intervals).map_err(|e| e.in_stage("ingest", None))?;

    let mut memory = NoveltyMemory::new();
    let mut seen_any_cluster = false;
    let mut warnings = Vec::new();
    let mut interval_reports = Vec::with_capacity(intervals.len());

    for interval in &intervals {
        let index = interval.index;
        let mut report = IntervalReport {
            interval: index,
            start: timestamp(&interval.start),
            end: timestamp(&interval.end),
            tweet_count: interval.tweets.len(),
            events: Vec::new(),
        };
        if interval.tweets.is_empty() {
            interval_reports.push(report);
            continue;
        }

        // Preprocess: cleaned docs plus per-tweet noun phrases.
        let docs: Vec<TokenDoc> = interval
            .tweets
            .iter()
            .map(|tweet| {
                TokenDoc::new(
                    tweet.id.clone(),
                    clean_text(
                        &tweet.text,
                        &resources.stopwords,
                        config.stemming,
                        &resources.dictionary,
                    ),
                )
            })
            .collect();
        let phrases_per_tweet: BTreeMap<String, Vec<String>> = interval
            .tweets
            .iter()
            .map(|tweet| {
                (
                    tweet.id.clone(),
                    extract_noun_phrases(&tweet.text, &resources.lexicon),
                )
            })
            .collect();
        let phrase_weights = build_phrase_weights(interval, &phrases_per_tweet);

        // Vectorize; an interval whose vocabulary prunes away entirely is
        // reported with zero events.
        let vocabulary = match build_vocabulary(&docs, &config.tfidf_params()) {
            Ok(vocabulary) => vocabulary,
            Err(Error::EmptyVocabulary) => {
                warnings.push(format!(
                    "interval {index}: vocabulary empty after pruning, no events"
                ));
                interval_reports.push(report);
                continue;
            }
            Err(e) => return Err(e.in_stage("vectorize", Some(index))),
        };
        let matrix = tfidf_transform(&docs, &vocabulary);

        // Cluster.
        let labels = dbscan(&matrix.rows, &config.dbscan_params())
            .map_err(|e| e.in_stage("cluster", Some(index)))?;
        let clusters = build_clusters(&labels, &interval.tweets);

        // Extract, classify, score; the novelty memory carries across
        // intervals and grows after every cluster.
        let mut events = Vec::new();
        for cluster in &clusters {
            let cluster_tokens = clean_text(
                &cluster.aggregated_text,
                &resources.stopwords,
                config.stemming,
                &resources.dictionary,
            );
            let ranked = textrank_keywords(&cluster_tokens, &config.textrank_params());
            let keywords = select_keywords(&ranked, config.textrank_keyword_fraction);

            let recognition = recognizer.recognize(&cluster.aggregated_text);
            if let Some(failure) = recognition.fallback {
                warnings.push(format!(
                    "interval {index} cluster {}: remote recognizer failed ({failure}); gazetteer fallback used",
                    cluster.cluster_id
                ));
            }

            let sets = build_term_sets(&keywords, &recognition.entities, config.promote_fraction);
            let novelty_tokens: BTreeSet<String> =
                sets.entity_only.union(&sets.common).cloned().collect();
            let similarity = novelty_similarity(&novelty_tokens, &memory);
            let event_type = classify_event(
                cluster.tweet_ids.len(),
                similarity,
                &sets,
                &config.detection_params(),
                !seen_any_cluster,
            );
            seen_any_cluster = true;

            if event_type != EventType::NotEvent {
                let event_phrases: BTreeSet<String> = cluster
                    .tweet_ids
                    .iter()
                    .filter_map(|id| phrases_per_tweet.get(id))
                    .flatten()
                    .cloned()
                    .collect();
                let scores = score_event(
                    event_type,
                    &sets,
                    cluster.tweet_ids.len(),
                    &phrase_weights,
                    &event_phrases,
                    &config.detection_params(),
                );
                events.push(EventRecord {
                    interval_index: index,
                    cluster_id: cluster.cluster_id,
                    event_type,
                    tweet_count: cluster.tweet_ids.len(),
                    entity_score: scores.entity_score,
                    influence_score: scores.influence_score,
                    total_score: scores.total_score,
                    rank: 0,
                    keywords: sets.union_all.iter().cloned().collect(),
                });
            }
            memory.update(&sets);
        }

        report.events = rank_events(events);
        interval_reports.push(report);
    }

    Ok(DetectionReport {
        config: config.clone(),
        warnings,
        intervals: interval_reports,
    })
}

/// The plot-data CSV: one row per event in rank order, with a 0-based event
/// index within its interval.
pub fn plot_data_csv(report: &DetectionReport) -> String {
    let mut csv = String::from("interval,event_index,tweet_count,total_score\n");
    for interval in &report.intervals {
        for (event_index, event) in interval.events.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                interval.interval, event_index, event.tweet_count, event.total_score
            ));
        }
    }
    csv
}
