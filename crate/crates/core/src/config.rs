//! Run configuration: every tunable of the pipeline, a flat `key=value`
//! config-file format, and validation against module preconditions.

use std::io::BufRead;
use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cluster::DbscanParams;
use crate::error::{Error, Result};
use crate::events::DetectionParams;
use crate::extract::{RemoteNerConfig, TextRankParams};
use crate::vectorize::TfidfParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NerMode {
    Gazetteer,
    Remote,
}

/// The resolved configuration of one run; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Number of equal time chunks.
    pub intervals: usize,
    /// Minimum tweet count for a trendy event.
    pub tweet_thresh: usize,
    /// Novelty similarity threshold.
    pub cosine_thresh: f64,
    /// Minimum cluster size to count as an event.
    pub min_event_tweets: usize,
    /// Focus heuristic: |common| must exceed this fraction of the entity set.
    pub common_to_entity_ratio: f64,
    /// Use the full entity set rather than entity-only in the focus ratio.
    pub ratio_uses_full_entity_set: bool,

    pub tfidf_max_df: f64,
    pub tfidf_min_df: f64,
    pub tfidf_max_features: usize,

    pub dbscan_eps: f64,
    pub dbscan_min_pts: usize,

    pub textrank_window: usize,
    pub textrank_damping: f64,
    pub textrank_tol: f64,
    pub textrank_max_iter: usize,
    /// Fraction of ranked vertices kept as the keyword set.
    pub textrank_keyword_fraction: f64,

    /// Fraction of each side's top scorers promoted into the common set.
    pub promote_fraction: f64,

    pub stemming: bool,
    pub spelling_max_edit_distance: usize,

    pub ner_mode: NerMode,
    pub ner_endpoint: Option<String>,
    pub ner_timeout_ms: u64,
    pub ner_retries: u32,
    pub ner_max_in_flight: usize,

    /// Resource overrides; bundled defaults are used when absent.
    pub stopwords_path: Option<PathBuf>,
    pub dictionary_path: Option<PathBuf>,
    pub lexicon_path: Option<PathBuf>,
    pub gazetteer_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            intervals: 5,
            tweet_thresh: 10,
            cosine_thresh: 0.5,
            min_event_tweets: 3,
            common_to_entity_ratio: 0.20,
            ratio_uses_full_entity_set: false,
            tfidf_max_df: 0.90,
            tfidf_min_df: 0.01,
            tfidf_max_features: 200_000,
            dbscan_eps: 1.0,
            dbscan_min_pts: 3,
            textrank_window: 2,
            textrank_damping: 0.85,
            textrank_tol: 1e-6,
            textrank_max_iter: 100,
            textrank_keyword_fraction: 1.0 / 3.0,
            promote_fraction: 0.10,
            stemming: false,
            spelling_max_edit_distance: 2,
            ner_mode: NerMode::Gazetteer,
            ner_endpoint: None,
            ner_timeout_ms: 5000,
            ner_retries: 2,
            ner_max_in_flight: 4,
            stopwords_path: None,
            dictionary_path: None,
            lexicon_path: None,
            gazetteer_path: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("bad value `{value}` for `{key}`: {e}")))
}

impl RunConfig {
    /// Apply one `key=value` pair. Keys use the flat dotted names of the
    /// config-file format.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "intervals" => self.intervals = parse_value(key, value)?,
            "tweet_thresh" => self.tweet_thresh = parse_value(key, value)?,
            "cosine_thresh" => self.cosine_thresh = parse_value(key, value)?,
            "events.min_event_tweets" => self.min_event_tweets = parse_value(key, value)?,
            "events.common_to_entity_ratio" => {
                self.common_to_entity_ratio = parse_value(key, value)?
            }
            "events.ratio_full_entity_set" => {
                self.ratio_uses_full_entity_set = parse_value(key, value)?
            }
            "tfidf.max_df" => self.tfidf_max_df = parse_value(key, value)?,
            "tfidf.min_df" => self.tfidf_min_df = parse_value(key, value)?,
            "tfidf.max_features" => self.tfidf_max_features = parse_value(key, value)?,
            "dbscan.eps" => self.dbscan_eps = parse_value(key, value)?,
            "dbscan.min_pts" => self.dbscan_min_pts = parse_value(key, value)?,
            "textrank.window" => self.textrank_window = parse_value(key, value)?,
            "textrank.damping" => self.textrank_damping = parse_value(key, value)?,
            "textrank.tol" => self.textrank_tol = parse_value(key, value)?,
            "textrank.max_iter" => self.textrank_max_iter = parse_value(key, value)?,
            "textrank.keyword_fraction" => {
                self.textrank_keyword_fraction = parse_value(key, value)?
            }
            "extract.promote_fraction" => self.promote_fraction = parse_value(key, value)?,
            "stemming" => self.stemming = parse_value(key, value)?,
            "preprocess.max_edit_distance" => {
                self.spelling_max_edit_distance = parse_value(key, value)?
            }
            "ner.mode" => {
                self.ner_mode = match value {
                    "gazetteer" => NerMode::Gazetteer,
                    "remote" => NerMode::Remote,
                    other => {
                        return Err(Error::Config(format!(
                            "bad value `{other}` for `ner.mode`: expected gazetteer or remote"
                        )))
                    }
                }
            }
            "ner.endpoint" => self.ner_endpoint = Some(value.to_owned()),
            "ner.timeout_ms" => self.ner_timeout_ms = parse_value(key, value)?,
            "ner.retries" => self.ner_retries = parse_value(key, value)?,
            "ner.max_in_flight" => self.ner_max_in_flight = parse_value(key, value)?,
            "resources.stopwords" => self.stopwords_path = Some(PathBuf::from(value)),
            "resources.dictionary" => self.dictionary_path = Some(PathBuf::from(value)),
            "resources.lexicon" => self.lexicon_path = Some(PathBuf::from(value)),
            "resources.gazetteer" => self.gazetteer_path = Some(PathBuf::from(value)),
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key `{other}`"
                )))
            }
        }
        Ok(())
    }

    /// Parse a flat `key = value` config file. `#` starts a comment.
    pub fn apply_file<R: BufRead>(&mut self, reader: R) -> Result<()> {
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let stripped = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line,
            };
            let trimmed = stripped.trim();
            if trimmed.is_empty() {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{trimmed}`",
                    idx + 1
                ))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Check every module precondition before a run starts.
    pub fn validate(&self) -> Result<()> {
        fn ensure(ok: bool, message: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(message.to_owned()))
            }
        }
        ensure(self.intervals >= 1, "intervals must be at least 1")?;
        ensure(self.tweet_thresh >= 1, "tweet_thresh must be at least 1")?;
        ensure(
            self.cosine_thresh > 0.0 && self.cosine_thresh <= 1.0,
            "cosine_thresh must be within (0, 1]",
        )?;
        ensure(
            self.min_event_tweets >= 1,
            "events.min_event_tweets must be at least 1",
        )?;
        ensure(
            self.common_to_entity_ratio >= 0.0,
            "events.common_to_entity_ratio must be non-negative",
        )?;
        ensure(
            (0.0..=1.0).contains(&self.tfidf_max_df),
            "tfidf.max_df must be within [0, 1]",
        )?;
        ensure(
            (0.0..=1.0).contains(&self.tfidf_min_df),
            "tfidf.min_df must be within [0, 1]",
        )?;
        ensure(
            self.tfidf_min_df <= self.tfidf_max_df,
            "tfidf.min_df must not exceed tfidf.max_df",
        )?;
        ensure(
            self.tfidf_max_features >= 1,
            "tfidf.max_features must be at least 1",
        )?;
        ensure(
            self.dbscan_eps > 0.0 && self.dbscan_eps.is_finite(),
            "dbscan.eps must be a positive finite number",
        )?;
        ensure(
            self.dbscan_min_pts >= 1,
            "dbscan.min_pts must be at least 1",
        )?;
        ensure(
            self.textrank_window >= 2,
            "textrank.window must be at least 2",
        )?;
        ensure(
            self.textrank_damping > 0.0 && self.textrank_damping < 1.0,
            "textrank.damping must be within (0, 1)",
        )?;
        ensure(self.textrank_tol > 0.0, "textrank.tol must be positive")?;
        ensure(
            self.textrank_max_iter >= 1,
            "textrank.max_iter must be at least 1",
        )?;
        ensure(
            self.textrank_keyword_fraction > 0.0 && self.textrank_keyword_fraction <= 1.0,
            "textrank.keyword_fraction must be within (0, 1]",
        )?;
        ensure(
            (0.0..=1.0).contains(&self.promote_fraction),
            "extract.promote_fraction must be within [0, 1]",
        )?;
        ensure(
            self.spelling_max_edit_distance <= 3,
            "preprocess.max_edit_distance above 3 makes the delete index explode",
        )?;
        ensure(
            self.ner_max_in_flight >= 1,
            "ner.max_in_flight must be at least 1",
        )?;
        if self.ner_mode == NerMode::Remote {
            ensure(
                self.ner_endpoint.is_some(),
                "ner.mode = remote requires ner.endpoint",
            )?;
        }
        Ok(())
    }

    pub fn tfidf_params(&self) -> TfidfParams {
        TfidfParams {
            max_df: self.tfidf_max_df,
            min_df: self.tfidf_min_df,
            max_features: self.tfidf_max_features,
        }
    }

    pub fn dbscan_params(&self) -> DbscanParams {
        DbscanParams {
            eps: self.dbscan_eps,
            min_pts: self.dbscan_min_pts,
        }
    }

    pub fn textrank_params(&self) -> TextRankParams {
        TextRankParams {
            window: self.textrank_window,
            damping: self.textrank_damping,
            tol: self.textrank_tol,
            max_iter: self.textrank_max_iter,
        }
    }

    pub fn detection_params(&self) -> DetectionParams {
        DetectionParams {
            cosine_thresh: self.cosine_thresh,
            tweet_thresh: self.tweet_thresh,
            min_event_tweets: self.min_event_tweets,
            common_to_entity_ratio: self.common_to_entity_ratio,
            ratio_uses_full_entity_set: self.ratio_uses_full_entity_set,
        }
    }

    pub fn remote_ner_config(&self) -> Option<RemoteNerConfig> {
        self.ner_endpoint.as_ref().map(|endpoint| RemoteNerConfig {
            endpoint: endpoint.clone(),
            timeout: Duration::from_millis(self.ner_timeout_ms),
            retries: self.ner_retries,
            max_in_flight: self.ner_max_in_flight,
        })
    }
}
