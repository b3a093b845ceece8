use std::path::PathBuf;

use thiserror::Error;

/// What went wrong while reading PENMAN text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PenmanErrorKind {
    EmptyInput,
    UnbalancedParens,
    DuplicateConcept(String),
    DanglingVariable(String),
    Unexpected(String),
}

impl std::fmt::Display for PenmanErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PenmanErrorKind::EmptyInput => write!(f, "empty input"),
            PenmanErrorKind::UnbalancedParens => write!(f, "unbalanced parentheses"),
            PenmanErrorKind::DuplicateConcept(v) => {
                write!(f, "variable `{v}` is assigned a concept more than once")
            }
            PenmanErrorKind::DanglingVariable(v) => {
                write!(f, "variable `{v}` is referenced but never defined")
            }
            PenmanErrorKind::Unexpected(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}")]
pub struct PenmanError {
    pub kind: PenmanErrorKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("line {line}: invalid annotation record: {message}")]
    Schema { line: usize, message: String },
    #[error("sentence `{id}`: {field} has {found} entries but there are {expected} tokens")]
    LengthMismatch {
        id: String,
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("sentence `{id}`: {message}")]
    InvalidSpan { id: String, message: String },
    #[error("sentence id `{0}` appears more than once")]
    DuplicateId(String),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model file version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("corrupt model file: {0}")]
    Corrupt(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Penman {
        path: PathBuf,
        #[source]
        source: PenmanError,
    },
    #[error("{path}: {source}")]
    Annotation {
        path: PathBuf,
        #[source]
        source: AnnotationError,
    },
    #[error("{path}: {source}")]
    Model {
        path: PathBuf,
        #[source]
        source: ModelError,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("AMR and annotation files disagree on sentence ids: {0}")]
    IdMismatch(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
