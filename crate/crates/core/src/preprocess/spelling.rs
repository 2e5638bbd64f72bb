//! Symmetric-delete spelling correction.
//!
//! Dictionary words are indexed by every deletion variant reachable within
//! `max_edit_distance` deletes. Looking up a token then only requires
//! generating the token's own deletion variants and verifying the candidates
//! found in the index by true Damerau-Levenshtein distance, instead of
//! scanning the whole dictionary.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};

/// Word-frequency dictionary with a precomputed delete index.
#[derive(Debug, Clone)]
pub struct FrequencyDictionary {
    entries: BTreeMap<String, u64>,
    max_edit_distance: usize,
    deletes: HashMap<String, Vec<String>>,
}

impl FrequencyDictionary {
    pub fn new(max_edit_distance: usize) -> Self {
        Self {
            entries: BTreeMap::new(),
            max_edit_distance,
            deletes: HashMap::new(),
        }
    }

    pub fn from_entries<I, S>(entries: I, max_edit_distance: usize) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut dict = Self::new(max_edit_distance);
        for (word, count) in entries {
            dict.insert(word.into(), count);
        }
        dict
    }

    /// Parse `word<space>count` lines. Blank lines and `#` comments are
    /// skipped; repeated words keep the larger count.
    pub fn load<R: BufRead>(reader: R, max_edit_distance: usize) -> Result<Self> {
        let mut dict = Self::new(max_edit_distance);
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let word = parts.next().ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected `word count`".to_owned(),
            })?;
            let count: u64 = parts
                .next()
                .ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: format!("missing count for `{word}`"),
                })?
                .parse()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad count for `{word}`: {e}"),
                })?;
            let normalized = word.to_lowercase();
            let existing = dict.frequency(&normalized).unwrap_or(0);
            if count >= existing {
                dict.insert(normalized, count);
            }
        }
        Ok(dict)
    }

    pub fn insert(&mut self, word: String, count: u64) {
        for variant in delete_variants(&word, self.max_edit_distance) {
            let candidates = self.deletes.entry(variant).or_default();
            if !candidates.iter().any(|c| c == &word) {
                candidates.push(word.clone());
            }
        }
        self.entries.insert(word, count);
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    pub fn max_edit_distance(&self) -> usize {
        self.max_edit_distance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, c)| (w.as_str(), *c))
    }

    fn candidates_for(&self, token: &str) -> Vec<&str> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for variant in delete_variants(token, self.max_edit_distance) {
            if let Some(words) = self.deletes.get(&variant) {
                for word in words {
                    if seen.insert(word.as_str()) {
                        out.push(word.as_str());
                    }
                }
            }
        }
        out
    }
}

/// All strings reachable from `word` by deleting up to `max_deletes`
/// characters, including `word` itself.
fn delete_variants(word: &str, max_deletes: usize) -> HashSet<String> {
    let mut variants = HashSet::new();
    variants.insert(word.to_owned());
    let mut frontier = vec![word.to_owned()];
    for _ in 0..max_deletes {
        let mut next = Vec::new();
        for current in &frontier {
            let chars: Vec<char> = current.chars().collect();
            if chars.is_empty() {
                continue;
            }
            for skip in 0..chars.len() {
                let shorter: String = chars
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, c)| c)
                    .collect();
                if variants.insert(shorter.clone()) {
                    next.push(shorter);
                }
            }
        }
        frontier = next;
    }
    variants
}

/// Damerau-Levenshtein distance (optimal string alignment): insertions,
/// deletions, substitutions, and adjacent transpositions each cost 1.
pub fn damerau_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    let cols = b.len() + 1;
    let mut prev_prev = vec![0usize; cols];
    let mut prev: Vec<usize> = (0..cols).collect();
    let mut curr = vec![0usize; cols];

    for (i, &ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            let mut best = (prev[j + 1] + 1).min(curr[j] + 1).min(prev[j] + cost);
            if i > 0 && j > 0 && ca == b[j - 1] && a[i - 1] == cb && ca != cb {
                best = best.min(prev_prev[j - 1] + 1);
            }
            curr[j + 1] = best;
        }
        std::mem::swap(&mut prev_prev, &mut prev);
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Correct one lowercase token against the dictionary.
///
/// Returns the candidate with the smallest verified edit distance, breaking
/// ties by higher corpus frequency and then lexicographically. Tokens already
/// in the dictionary, tokens shorter than two characters, and tokens with no
/// candidate within `max_edit_distance` come back unchanged.
pub fn correct_spelling(token: &str, dict: &FrequencyDictionary) -> String {
    if token.chars().count() < 2 || dict.contains(token) {
        return token.to_owned();
    }

    let max_distance = dict.max_edit_distance();
    let mut best: Option<(usize, u64, &str)> = None;
    for candidate in dict.candidates_for(token) {
        let distance = damerau_levenshtein(token, candidate);
        if distance > max_distance {
            continue;
        }
        let frequency = dict.frequency(candidate).unwrap_or(0);
        let better = match best {
            None => true,
            Some((d, f, w)) => {
                (distance, std::cmp::Reverse(frequency), candidate) < (d, std::cmp::Reverse(f), w)
            }
        };
        if better {
            best = Some((distance, frequency, candidate));
        }
    }

    match best {
        Some((_, _, word)) => word.to_owned(),
        None => token.to_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand::rngs::StdRng;

    fn small_dict() -> FrequencyDictionary {
        FrequencyDictionary::from_entries(
            [("password", 1000u64), ("passed", 500), ("server", 800)],
            2,
        )
    }

    #[test]
    fn dictionary_word_is_unchanged() {
        assert_eq!(correct_spelling("password", &small_dict()), "password");
    }

    #[test]
    fn misspelling_picks_min_distance_then_frequency() {
        // "pasword" is 1 edit from "password" and 3 from "passed".
        assert_eq!(correct_spelling("pasword", &small_dict()), "password");
    }

    #[test]
    fn no_candidate_within_distance_falls_back() {
        assert_eq!(correct_spelling("zzqqkx", &small_dict()), "zzqqkx");
    }

    #[test]
    fn short_tokens_are_left_alone() {
        let dict = FrequencyDictionary::from_entries([("an", 10u64), ("ex", 5)], 2);
        assert_eq!(correct_spelling("x", &dict), "x");
    }

    #[test]
    fn frequency_breaks_distance_ties() {
        let dict = FrequencyDictionary::from_entries([("cart", 10u64), ("card", 900)], 2);
        // "carx" is distance 1 from both.
        assert_eq!(correct_spelling("carx", &dict), "card");
    }

    #[test]
    fn transposition_counts_as_one_edit() {
        assert_eq!(damerau_levenshtein("recieve", "receive"), 1);
        assert_eq!(damerau_levenshtein("ab", "ba"), 1);
    }

    #[test]
    fn distance_basics() {
        assert_eq!(damerau_levenshtein("", ""), 0);
        assert_eq!(damerau_levenshtein("abc", ""), 3);
        assert_eq!(damerau_levenshtein("", "ab"), 2);
        assert_eq!(damerau_levenshtein("kitten", "sitting"), 3);
        assert_eq!(damerau_levenshtein("struts", "status"), 2);
    }

    /// Reference distance used only by the oracle test below: a plain
    /// full-matrix optimal-string-alignment DP, written independently of the
    /// row-rolling implementation above.
    #[allow(clippy::needless_range_loop)]
    fn oracle_distance(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=b.len() {
            d[0][j] = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = usize::from(a[i - 1] != b[j - 1]);
                d[i][j] = (d[i - 1][j] + 1)
                    .min(d[i][j - 1] + 1)
                    .min(d[i - 1][j - 1] + cost);
                if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                    d[i][j] = d[i][j].min(d[i - 2][j - 2] + 1);
                }
            }
        }
        d[a.len()][b.len()]
    }

    /// Brute-force correction: scan every dictionary word, no delete index.
    fn oracle_correct(token: &str, dict: &FrequencyDictionary) -> String {
        if token.chars().count() < 2 || dict.contains(token) {
            return token.to_owned();
        }
        let mut best: Option<(usize, u64, &str)> = None;
        for (word, freq) in dict.words() {
            let distance = oracle_distance(token, word);
            if distance > dict.max_edit_distance() {
                continue;
            }
            let better = match best {
                None => true,
                Some((d, f, w)) => {
                    (distance, std::cmp::Reverse(freq), word) < (d, std::cmp::Reverse(f), w)
                }
            };
            if better {
                best = Some((distance, freq, word));
            }
        }
        best.map(|(_, _, w)| w.to_owned())
            .unwrap_or_else(|| token.to_owned())
    }

    #[test]
    fn delete_lookup_matches_brute_force_scan() {
        let words = [
            "password",
            "passed",
            "server",
            "attack",
            "vulnerability",
            "exploit",
            "malware",
            "phishing",
            "breach",
            "security",
            "network",
            "windows",
            "android",
            "apache",
            "ransom",
            "botnet",
            "patch",
            "threat",
            "denial",
            "service",
        ];
        let dict = FrequencyDictionary::from_entries(words.iter().map(|w| (*w, 100u64)), 2);

        let alphabet: Vec<char> = "abcdefghijklmnopqrstuvwxyz".chars().collect();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let base = words[rng.random_range(0..words.len())];
            let mut chars: Vec<char> = base.chars().collect();
            for _ in 0..rng.random_range(1..=2usize) {
                match rng.random_range(0..4) {
                    0 if chars.len() > 2 => {
                        let i = rng.random_range(0..chars.len());
                        chars.remove(i);
                    }
                    1 => {
                        let i = rng.random_range(0..=chars.len());
                        chars.insert(i, alphabet[rng.random_range(0..26)]);
                    }
                    2 => {
                        let i = rng.random_range(0..chars.len());
                        chars[i] = alphabet[rng.random_range(0..26)];
                    }
                    _ if chars.len() >= 2 => {
                        let i = rng.random_range(0..chars.len() - 1);
                        chars.swap(i, i + 1);
                    }
                    _ => {}
                }
            }
            let misspelled: String = chars.into_iter().collect();
            assert_eq!(
                correct_spelling(&misspelled, &dict),
                oracle_correct(&misspelled, &dict),
                "token {misspelled:?}"
            );
        }
    }
}
