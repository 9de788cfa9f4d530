//! Epidemiological line-list extraction from dependency-parsed outbreak bulletins.
//!
//! The pipeline runs in three levels over each bulletin:
//!
//! * level 0 segments the bulletin into cases using age/gender regexes,
//! * level 1 resolves onset, hospitalization and outcome dates by shortest
//!   dependency distance between indicator words and date phrases,
//! * level 2 classifies clinical features (Y/N) with dependency-scoped
//!   negation detection.
//!
//! Indicator words are grown from a single seed per feature using skip-gram
//! embeddings trained on the bulletin corpus itself ([`embeddings`]).
//! Extracted lists are scored against gold annotations ([`eval`]) and
//! summarized into demographic and interval histograms ([`infer`]).
//!
//! Numerical code is generic over the scalar type (see [`scalar`]); the
//! aliases below pick the concrete precisions used by the command-line tool.

pub mod corpus;
pub mod depgraph;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod extract;
pub mod infer;
pub mod scalar;

pub use crate::error::{Error, Result};
pub use crate::scalar::{AtomicScalar, Real, Weight};

/// Single-precision embedding model, the default for training runs.
pub type EmbeddingModel32 = embeddings::EmbeddingModel<f32>;

/// Double-precision embedding model.
pub type EmbeddingModel64 = embeddings::EmbeddingModel<f64>;

/// Exact quality-score weight used for bipartite matching.
pub type ExactScore = num_rational::Ratio<i64>;
