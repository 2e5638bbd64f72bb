//! Unigram POS tagging and noun-phrase chunking.
//!
//! Tagging is lexicon-driven with a noun default for unknown tokens: short
//! stream text is entity-dense, so recall on noun phrases matters more than
//! tagging precision here. Chunks are maximal `(adjective)* (noun)+` runs.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosTag {
    Noun,
    Adj,
    Verb,
    Adv,
    Other,
}

impl PosTag {
    fn parse(s: &str) -> Option<PosTag> {
        match s {
            "noun" => Some(PosTag::Noun),
            "adj" => Some(PosTag::Adj),
            "verb" => Some(PosTag::Verb),
            "adv" => Some(PosTag::Adv),
            "other" => Some(PosTag::Other),
            _ => None,
        }
    }
}

/// Unigram word → tag lexicon.
#[derive(Debug, Clone, Default)]
pub struct PosLexicon {
    entries: HashMap<String, PosTag>,
}

const NOUN_SUFFIXES: &[&str] = &["tion", "ity", "ware", "er"];

impl PosLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `word<tab>tag` lines with tags in {noun, adj, verb, adv, other}.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = HashMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (word, tag) = trimmed.split_once('\t').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected `word<tab>tag`".to_owned(),
            })?;
            let tag = PosTag::parse(tag.trim()).ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("unknown tag `{}`", tag.trim()),
            })?;
            entries.insert(word.trim().to_lowercase(), tag);
        }
        Ok(Self { entries })
    }

    pub fn insert(&mut self, word: &str, tag: PosTag) {
        self.entries.insert(word.to_lowercase(), tag);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Tag a lowercase token: lexicon hit, then noun-ish suffix fallback,
    /// then noun for anything unknown.
    pub fn tag(&self, token: &str) -> PosTag {
        if let Some(tag) = self.entries.get(token) {
            return *tag;
        }
        if NOUN_SUFFIXES.iter().any(|s| token.ends_with(s)) {
            return PosTag::Noun;
        }
        PosTag::Noun
    }
}

/// Extract lowercase noun phrases: maximal `(adjective)* (noun)+` token runs,
/// joined by single spaces.
pub fn extract_noun_phrases(text: &str, lexicon: &PosLexicon) -> Vec<String> {
    let lowered = text.to_lowercase();
    let tokens: Vec<&str> = lowered
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect();

    let mut phrases = Vec::new();
    let mut adjectives: Vec<&str> = Vec::new();
    let mut nouns: Vec<&str> = Vec::new();

    let mut flush = |adjectives: &mut Vec<&str>, nouns: &mut Vec<&str>| {
        if !nouns.is_empty() {
            let mut parts = Vec::with_capacity(adjectives.len() + nouns.len());
            parts.extend(adjectives.iter().copied());
            parts.extend(nouns.iter().copied());
            phrases.push(parts.join(" "));
        }
        adjectives.clear();
        nouns.clear();
    };

    for token in tokens {
        match lexicon.tag(token) {
            PosTag::Adj => {
                if !nouns.is_empty() {
                    // A new adjective closes the previous noun run.
                    flush(&mut adjectives, &mut nouns);
                }
                adjectives.push(token);
            }
            PosTag::Noun => nouns.push(token),
            _ => flush(&mut adjectives, &mut nouns),
        }
    }
    flush(&mut adjectives, &mut nouns);
    phrases
}
