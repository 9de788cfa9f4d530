use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("CoNLL-U parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed dependency structure in sentence {sentence}: {message}")]
    Structure { sentence: usize, message: String },

    #[error("cannot normalize date phrase '{0}'")]
    DateNormalization(String),

    #[error("vocabulary is empty after applying min_count = {0}")]
    EmptyVocabulary(usize),

    #[error("invalid training parameters: {0}")]
    InvalidParams(String),

    #[error("word '{0}' is not in the vocabulary")]
    OutOfVocabulary(String),

    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,

    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("token {0} is not part of the dependency graph")]
    TokenNotInGraph(usize),

    #[error("requested {requested} neighbors but only {available} other words exist")]
    InsufficientNeighbors { requested: usize, available: usize },

    #[error("gold case has no non-null feature")]
    AllNullGold,

    #[error("unknown line-list feature '{0}'")]
    UnknownFeature(String),

    #[error("feature '{0}' is not a date feature")]
    NotADateFeature(String),

    #[error("line-list schema error: {0}")]
    Schema(String),

    #[error("embedding file error at line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
