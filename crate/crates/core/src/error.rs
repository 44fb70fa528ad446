use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live in different spaces: `{left}` vs `{right}`")]
    SpaceMismatch { left: String, right: String },

    #[error("tensor order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("unsupported tensor order {0} (expected 1, 2 or 3)")]
    UnsupportedOrder(usize),

    #[error("index {index} out of range for space of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("non-finite weight {0}")]
    NonFinite(f64),

    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),

    #[error("basis is empty")]
    EmptyBasis,

    #[error("invalid pregroup type `{0}`")]
    InvalidType(String),

    #[error("word `{0}` is not in the lexicon")]
    UnknownWord(String),

    #[error("ungrammatical input `{sentence}`: reduces to `{residual}`")]
    Ungrammatical { sentence: String, residual: String },

    #[error("no lexical semantics for `{0}`")]
    MissingEntry(String),

    #[error("`{word}` has type `{ty}` but its tensor has order {order}")]
    ArityMismatch {
        word: String,
        ty: String,
        order: usize,
    },

    #[error("unsupported sentence pattern `{0}`")]
    UnsupportedPattern(String),

    #[error("contraction plan does not match the recognised pattern for `{0}`")]
    PlanMismatch(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least {required} observations, got {found}")]
    TooFewObservations { required: usize, found: usize },

    #[error("correlation undefined: {0} input is constant")]
    ConstantInput(&'static str),

    #[error("no pairs tagged {0}")]
    EmptyTagClass(&'static str),

    #[error("pair `{0}` has no HIGH/LOW tag")]
    UntaggedPair(String),

    #[error("rating {0} outside [1, 7]")]
    RatingOutOfRange(f64),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("window must be at least 1")]
    ZeroWindow,

    #[error("accumulator has no documents")]
    NoDocuments,

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
