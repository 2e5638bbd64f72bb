//! Bundled default resources and path-based overrides.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Cursor};
use std::path::Path;

use crate::config::RunConfig;
use crate::error::Result;
use crate::extract::Gazetteer;
use crate::preprocess::{load_stopwords, FrequencyDictionary, PosLexicon};

const STOPWORDS: &str = include_str!("../resources/stopwords_en.txt");
const FREQUENCY_DICTIONARY: &str = include_str!("../resources/frequency_dictionary_en.txt");
const POS_LEXICON: &str = include_str!("../resources/pos_lexicon_en.txt");
const GAZETTEER: &str = include_str!("../resources/gazetteer_cyber.txt");

pub fn default_stopwords() -> HashSet<String> {
    load_stopwords(Cursor::new(STOPWORDS)).expect("bundled stopword list parses")
}

pub fn default_frequency_dictionary(max_edit_distance: usize) -> FrequencyDictionary {
    FrequencyDictionary::load(Cursor::new(FREQUENCY_DICTIONARY), max_edit_distance)
        .expect("bundled frequency dictionary parses")
}

pub fn default_pos_lexicon() -> PosLexicon {
    PosLexicon::load(Cursor::new(POS_LEXICON)).expect("bundled POS lexicon parses")
}

pub fn default_gazetteer() -> Gazetteer {
    Gazetteer::load(Cursor::new(GAZETTEER)).expect("bundled gazetteer parses")
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

/// The immutable lexical resources of one run.
#[derive(Debug, Clone)]
pub struct Resources {
    pub stopwords: HashSet<String>,
    pub dictionary: FrequencyDictionary,
    pub lexicon: PosLexicon,
    pub gazetteer: Gazetteer,
}

impl Resources {
    /// Load the resources named by the config, falling back to the bundled
    /// defaults for any path left unset.
    pub fn load(config: &RunConfig) -> Result<Self> {
        let stopwords = match &config.stopwords_path {
            Some(path) => load_stopwords(open(path)?)?,
            None => default_stopwords(),
        };
        let dictionary = match &config.dictionary_path {
            Some(path) => {
                FrequencyDictionary::load(open(path)?, config.spelling_max_edit_distance)?
            }
            None => default_frequency_dictionary(config.spelling_max_edit_distance),
        };
        let lexicon = match &config.lexicon_path {
            Some(path) => PosLexicon::load(open(path)?)?,
            None => default_pos_lexicon(),
        };
        let gazetteer = match &config.gazetteer_path {
            Some(path) => Gazetteer::load(open(path)?)?,
            None => default_gazetteer(),
        };
        Ok(Self {
            stopwords,
            dictionary,
            lexicon,
            gazetteer,
        })
    }

    pub fn defaults() -> Self {
        Self::load(&RunConfig::default()).expect("bundled resources load")
    }
}

/// Read a whole file as lines for callers that already have a path.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let reader = open(path)?;
    let mut lines = Vec::new();
    for line in reader.lines() {
        lines.push(line?);
    }
    Ok(lines)
}
