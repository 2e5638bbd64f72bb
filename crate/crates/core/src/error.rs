//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A required input field is absent.
    #[error("missing required field `{0}`")]
    MissingField(&'static str),

    /// A field is present but cannot be interpreted.
    #[error("invalid value for `{field}`: {message}")]
    InvalidField {
        field: &'static str,
        message: String,
    },

    /// A line-oriented input file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation precondition was violated by the caller.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every term was pruned by the document-frequency thresholds.
    #[error("vocabulary is empty after document-frequency pruning")]
    EmptyVocabulary,

    /// A configuration key or value failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// The detected-event / ground-truth alignment is inconsistent.
    #[error("alignment error: {0}")]
    Alignment(String),

    /// The remote recognizer returned something outside the wire protocol.
    #[error("remote recognizer protocol error: {0}")]
    Protocol(String),

    /// Transport-level failure talking to the remote recognizer.
    #[error("remote recognizer transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },

    /// A pipeline stage failed; carries the stage name and interval index.
    #[error("{stage} stage failed{}: {source}", .interval.map(|i| format!(" in interval {i}")).unwrap_or_default())]
    Stage {
        stage: &'static str,
        interval: Option<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wrap an error with the pipeline stage and interval it occurred in.
    pub fn in_stage(self, stage: &'static str, interval: Option<usize>) -> Error {
        Error::Stage {
            stage,
            interval,
            source: Box::new(self),
        }
    }
}
