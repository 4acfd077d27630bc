//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure surfaced by the library.
///
/// The CLI sorts these into "usage" (bad arguments, unknown names, missing
/// paths — exit 2) and "data" (malformed or degenerate input — exit 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed record in an input file; `line` is 1-based (a byte offset
    /// for formats where lines are meaningless, see the message).
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),

    #[error("unknown class {0:?}")]
    UnknownClass(String),

    #[error("term not in vocabulary: {0:?}")]
    UnknownTerm(String),

    #[error("degenerate class: {class:?} has no relevant documents in the {split} split")]
    DegenerateClass { class: String, split: &'static str },

    #[error("training split is empty")]
    EmptyTrainingSplit,

    #[error("vocabulary is empty (no n-gram reaches min_df)")]
    EmptyVocabulary,

    #[error("invalid query at offset {offset}: {message}")]
    QuerySyntax { offset: usize, message: String },

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn malformed(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Malformed { path: path.into(), line, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
