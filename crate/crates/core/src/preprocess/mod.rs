//! Text cleaning: spell correction, punctuation/stopword/length-1 removal,
//! optional stemming, and noun-phrase extraction.

mod phrases;
mod spelling;
mod stemmer;

pub use phrases::{extract_noun_phrases, PosLexicon, PosTag};
pub use spelling::{correct_spelling, damerau_levenshtein, FrequencyDictionary};
pub use stemmer::stem;

use std::collections::HashSet;
use std::io::BufRead;

use crate::error::Result;

/// A cleaned tweet: lowercase alphanumeric tokens of length ≥ 2, stopwords
/// removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenDoc {
    pub tweet_id: String,
    pub tokens: Vec<String>,
}

impl TokenDoc {
    pub fn new(tweet_id: impl Into<String>, tokens: Vec<String>) -> Self {
        Self {
            tweet_id: tweet_id.into(),
            tokens,
        }
    }
}

/// Load a stopword list: plain text, one word per line.
pub fn load_stopwords<R: BufRead>(reader: R) -> Result<HashSet<String>> {
    let mut words = HashSet::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        words.insert(trimmed.to_lowercase());
    }
    Ok(words)
}

/// Clean raw text into tokens.
///
/// Pipeline order: lowercase, split on non-alphanumeric runs, spell-correct
/// each token, drop stopwords, optionally stem, drop length-1 tokens.
/// Correcting before stopword removal keeps misspelled stopwords from
/// surviving the filter.
pub fn clean_text(
    text: &str,
    stopwords: &HashSet<String>,
    stemming: bool,
    dict: &FrequencyDictionary,
) -> Vec<String> {
    let lowered = text.to_lowercase();
    lowered
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|token| correct_spelling(token, dict))
        .filter(|token| !stopwords.contains(token))
        .map(|token| if stemming { stem(&token) } else { token })
        .filter(|token| token.chars().count() >= 2)
        .collect()
}
