//! Stream record parsing, retweet/quote resolution, equal time chunking,
//! and ground-truth annotation loading.

use std::collections::BTreeSet;
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Manual relevance judgment carried by some input records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelevanceLabel {
    Relevant,
    Irrelevant,
}

/// One resolved stream record.
///
/// `text` already reflects the retweet/quote resolution rule: when the record
/// wraps another status that carries a `full_text`, that embedded text wins.
#[derive(Debug, Clone, PartialEq)]
pub struct Tweet {
    pub id: String,
    pub author_id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub follower_count: u64,
    pub relevance_label: Option<RelevanceLabel>,
}

/// One equal-width time chunk of the corpus.
///
/// `end` is exclusive except for the final interval, which is closed so the
/// globally latest record still belongs somewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub index: usize,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
    pub tweets: Vec<Tweet>,
}

fn str_field(record: &Value, key: &'static str) -> Result<String> {
    match record.get(key) {
        None | Some(Value::Null) => Err(Error::MissingField(key)),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(other) => Err(Error::InvalidField {
            field: key,
            message: format!("expected a string, got {other}"),
        }),
    }
}

fn embedded_full_text(record: &Value, key: &str) -> Option<String> {
    record
        .get(key)
        .and_then(|status| status.get("full_text"))
        .and_then(Value::as_str)
        .map(str::to_owned)
}

/// Parse one tweet-shaped JSON object into a [`Tweet`].
///
/// Text resolution: an embedded `retweeted_status.full_text` takes precedence
/// over `quoted_status.full_text`, which takes precedence over the record's
/// own `text`.
pub fn parse_tweet(record: &Value) -> Result<Tweet> {
    let id = str_field(record, "id")?;
    let created_raw = str_field(record, "created_at")?;
    let created_at = DateTime::parse_from_rfc3339(&created_raw)
        .map(|dt| dt.with_timezone(&Utc))
        .map_err(|e| Error::InvalidField {
            field: "created_at",
            message: format!("`{created_raw}` is not a valid ISO-8601 timestamp: {e}"),
        })?;

    let user = record.get("user").ok_or(Error::MissingField("user"))?;
    let author_id = match user.get("id") {
        None | Some(Value::Null) => return Err(Error::MissingField("user.id")),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        Some(other) => {
            return Err(Error::InvalidField {
                field: "user.id",
                message: format!("expected a string or number, got {other}"),
            })
        }
    };
    let follower_count = user
        .get("followers_count")
        .ok_or(Error::MissingField("user.followers_count"))?
        .as_u64()
        .ok_or_else(|| Error::InvalidField {
            field: "user.followers_count",
            message: "expected a non-negative integer".to_owned(),
        })?;

    let own_text = str_field(record, "text")?;
    let text = embedded_full_text(record, "retweeted_status")
        .or_else(|| embedded_full_text(record, "quoted_status"))
        .unwrap_or(own_text);
    if text.is_empty() {
        return Err(Error::InvalidField {
            field: "text",
            message: "text is empty after retweet/quote resolution".to_owned(),
        });
    }

    let relevance_label = match record.get("relevance_label") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            serde_json::from_value::<RelevanceLabel>(v.clone()).map_err(|_| {
                Error::InvalidField {
                    field: "relevance_label",
                    message: format!("expected \"relevant\" or \"irrelevant\", got {v}"),
                }
            })?,
        ),
    };

    Ok(Tweet {
        id,
        author_id,
        created_at,
        text,
        follower_count,
        relevance_label,
    })
}

/// Read a JSON-lines stream of tweet records, one object per line.
///
/// Blank lines are skipped; any other malformed line fails with its line
/// number.
pub fn read_tweets<R: BufRead>(reader: R) -> Result<Vec<Tweet>> {
    let mut tweets = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        let tweet = parse_tweet(&record).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        tweets.push(tweet);
    }
    Ok(tweets)
}

/// Slice the corpus into `n` equal-duration intervals spanning the observed
/// min/max timestamps.
///
/// Boundaries are computed in whole milliseconds from the observed span, so
/// interval widths differ by at most one millisecond. A record exactly on a
/// boundary goes to the later interval; the globally latest record goes to
/// the last interval.
pub fn chunk_intervals(tweets: &[Tweet], n: usize) -> Result<Vec<Interval>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of intervals must be at least 1".to_owned(),
        ));
    }
    if tweets.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot chunk an empty tweet list".to_owned(),
        ));
    }

    let min_ms = tweets
        .iter()
        .map(|t| t.created_at.timestamp_millis())
        .min()
        .expect("non-empty");
    let max_ms = tweets
        .iter()
        .map(|t| t.created_at.timestamp_millis())
        .max()
        .expect("non-empty");
    let boundaries = interval_boundaries_ms(min_ms, max_ms, n);

    let from_ms = |ms: i64| DateTime::<Utc>::from_timestamp_millis(ms).expect("in-range timestamp");

    let mut intervals: Vec<Interval> = (0..n)
        .map(|i| Interval {
            index: i,
            start: from_ms(boundaries[i]),
            end: from_ms(boundaries[i + 1]),
            tweets: Vec::new(),
        })
        .collect();

    let mut ordered: Vec<&Tweet> = tweets.iter().collect();
    ordered.sort_by(|a, b| {
        a.created_at
            .cmp(&b.created_at)
            .then_with(|| a.id.cmp(&b.id))
    });

    for tweet in ordered {
        let ms = tweet.created_at.timestamp_millis();
        // Number of internal boundaries at or before this record; a record
        // exactly on a boundary therefore lands in the later interval.
        let idx = boundaries[1..n].partition_point(|b| *b <= ms);
        intervals[idx].tweets.push(tweet.clone());
    }

    Ok(intervals)
}

/// The `n + 1` boundary instants (in Unix milliseconds) dividing
/// `[min_ms, max_ms]` into `n` equal chunks.
pub fn interval_boundaries_ms(min_ms: i64, max_ms: i64, n: usize) -> Vec<i64> {
    let span = i128::from(max_ms) - i128::from(min_ms);
    let mut boundaries = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let offset = span * i as i128 / n as i128;
        boundaries.push(min_ms + offset as i64);
    }
    boundaries
}

/// Category assigned by a human annotator to a ground-truth event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventCategory {
    FirstStory,
    Trending,
    NovelAndTrending,
}

/// One annotated ground-truth event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedEvent {
    pub event_key: String,
    pub annotator_rank: u32,
    pub category: EventCategory,
}

/// The full ground-truth annotation set for one evaluation window.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotationSet {
    pub events: Vec<AnnotatedEvent>,
    pub non_event_clusters: usize,
}

impl AnnotationSet {
    pub fn event_keys(&self) -> BTreeSet<String> {
        self.events.iter().map(|e| e.event_key.clone()).collect()
    }
}

#[derive(Deserialize)]
struct AnnotationHeader {
    non_event_clusters: usize,
}

/// Load an annotation file: JSON-lines event records plus exactly one header
/// object `{"non_event_clusters": <int>}`.
pub fn load_annotations<R: BufRead>(reader: R) -> Result<AnnotationSet> {
    let mut events: Vec<AnnotatedEvent> = Vec::new();
    let mut seen_keys = BTreeSet::new();
    let mut seen_ranks = BTreeSet::new();
    let mut header: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;

        if value.get("non_event_clusters").is_some() {
            let parsed: AnnotationHeader =
                serde_json::from_value(value).map_err(|e| Error::Parse {
                    line: lineno,
                    message: e.to_string(),
                })?;
            if header.replace(parsed.non_event_clusters).is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "duplicate non_event_clusters header".to_owned(),
                });
            }
            continue;
        }

        let event: AnnotatedEvent = serde_json::from_value(value).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if event.annotator_rank == 0 {
            return Err(Error::Parse {
                line: lineno,
                message: "annotator_rank must be a positive integer".to_owned(),
            });
        }
        if !seen_keys.insert(event.event_key.clone()) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("duplicate event_key `{}`", event.event_key),
            });
        }
        if !seen_ranks.insert(event.annotator_rank) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("duplicate annotator_rank {}", event.annotator_rank),
            });
        }
        events.push(event);
    }

    let non_event_clusters = header.ok_or_else(|| Error::Parse {
        line: 0,
        message: "annotation file is missing the non_event_clusters header".to_owned(),
    })?;

    Ok(AnnotationSet {
        events,
        non_event_clusters,
    })
}
