use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::EmbeddingModel;
use crate::error::{Error, Result};
use crate::scalar::{dot, norm, Real};

/// Seed indicator plus its nearest neighbors, seed first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorSet {
    pub feature: String,
    pub seed: String,
    pub indicators: Vec<String>,
}

impl IndicatorSet {
    /// The single-indicator set used when no embedding expansion is wanted.
    pub fn seed_only(feature: impl Into<String>, seed: impl Into<String>) -> Self {
        let seed = seed.into().to_lowercase();
        IndicatorSet {
            feature: feature.into(),
            indicators: vec![seed.clone()],
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.indicators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indicators.is_empty()
    }
}

/// Cosine similarity, clamped to `[-1, 1]`.
pub fn cosine<T: Real>(u: &[T], v: &[T]) -> Result<T> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == T::zero() || nv == T::zero() {
        return Err(Error::ZeroVector);
    }
    let c = dot(u, v) / (nu * nv);
    Ok(c.max(-T::one()).min(T::one()))
}

/// The `k` words closest to `word` by cosine similarity over input vectors,
/// most similar first; equal similarities are ordered by vocabulary index.
/// Words with zero vectors are never returned.
pub fn nearest<T: Real>(
    model: &EmbeddingModel<T>,
    word: &str,
    k: usize,
) -> Result<Vec<(String, T)>> {
    let vocab = model.vocabulary();
    let seed = vocab
        .lookup(word)
        .ok_or_else(|| Error::OutOfVocabulary(word.to_string()))?;
    let query = model.input_vector(seed);
    if norm(query) == T::zero() {
        return Err(Error::ZeroVector);
    }

    let mut scored: Vec<(usize, T)> = (0..vocab.len())
        .filter(|&i| i != seed)
        .filter_map(|i| cosine(query, model.input_vector(i)).ok().map(|c| (i, c)))
        .collect();
    if scored.len() < k {
        return Err(Error::InsufficientNeighbors {
            requested: k,
            available: scored.len(),
        });
    }
    let order = |a: &(usize, T), b: &(usize, T)| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then(a.0.cmp(&b.0))
    };
    if k < scored.len() && k > 0 {
        scored.select_nth_unstable_by(k - 1, order);
    }
    scored.truncate(k);
    scored.sort_unstable_by(order);
    Ok(scored
        .into_iter()
        .map(|(i, c)| (vocab.word(i).to_string(), c))
        .collect())
}

/// Expands `seed` into `k + 1` indicators: the seed followed by its `k`
/// nearest neighbors.
pub fn grow_seed<T: Real>(
    model: &EmbeddingModel<T>,
    feature: &str,
    seed: &str,
    k: usize,
) -> Result<IndicatorSet> {
    let seed = seed.to_lowercase();
    if model.vocabulary().lookup(&seed).is_none() {
        return Err(Error::OutOfVocabulary(seed));
    }
    let mut set = IndicatorSet::seed_only(feature, seed.as_str());
    if k > 0 {
        set.indicators
            .extend(nearest(model, &seed, k)?.into_iter().map(|(w, _)| w));
    }
    Ok(set)
}
