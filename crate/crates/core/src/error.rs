use thiserror::Error;

/// Errors produced by the ranking toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("label sets differ: {0}")]
    LabelMismatch(String),

    #[error("ranking contains unranked objects; a complete ranking is required")]
    MissingRank,

    #[error("ranking contains ties; a tie-free ranking is required")]
    TiesPresent,

    #[error("correlation undefined: {0}")]
    Undefined(String),

    #[error("dimension mismatch: expected {expected} objects, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("problem too large: {what} = {value} exceeds the limit of {limit}")]
    SizeCap {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("majority relation contains a cycle through objects {0:?}")]
    Cycle(Vec<String>),

    #[error("majority relation is not a weak order: {0}")]
    IntransitiveTies(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
