//! Skip-gram word embeddings over the bulletin corpus and the seed-growth
//! queries built on them.
//!
//! Two objectives are supported: negative sampling ([`Variant::Sgns`]) and
//! hierarchical softmax over a Huffman tree ([`Variant::Sghs`]).

mod gradient;
mod huffman;
mod io;
mod negative;
mod neighbors;
mod train;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use self::gradient::{
    sghs_gradient, sghs_objective, sghs_pair_gradient, sghs_probability, sgns_gradient,
    sgns_objective, sgns_pair_gradient, SghsGradient, SgnsGradient,
};
pub use self::huffman::HuffmanTree;
pub use self::io::{read_word2vec, write_word2vec};
pub use self::negative::NegativeTable;
pub use self::neighbors::{cosine, grow_seed, nearest, IndicatorSet};
pub use self::train::train;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Skip-gram with negative sampling.
    Sgns,
    /// Skip-gram with hierarchical softmax.
    Sghs,
}

impl Variant {
    /// Neighbors added per seed in the best-performing configuration of
    /// each variant.
    pub fn default_k(self) -> usize {
        match self {
            Variant::Sgns => 5,
            Variant::Sghs => 7,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Sgns => "sgns",
            Variant::Sghs => "sghs",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sgns" => Ok(Variant::Sgns),
            "sghs" => Ok(Variant::Sghs),
            other => Err(Error::InvalidParams(format!(
                "unknown variant '{other}', expected sgns or sghs"
            ))),
        }
    }
}

/// Skip-gram hyper-parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingParams {
    pub dimensionality: usize,
    /// Symmetric context radius; windows never cross sentence boundaries.
    pub window: usize,
    /// Negative samples per positive pair (SGNS only).
    pub negative_samples: usize,
    /// Full passes over the corpus.
    pub iterations: usize,
    /// Initial learning rate, decayed linearly to `min_learning_rate`.
    pub learning_rate: f64,
    pub min_learning_rate: f64,
    /// Frequent-word subsampling threshold; 0 disables subsampling.
    pub subsample: f64,
    pub rng_seed: u64,
    /// Worker threads. With 1 thread training is bit-reproducible.
    pub threads: usize,
}

impl TrainingParams {
    /// Best-performing negative-sampling configuration: d = 300, window 5,
    /// one negative sample, two iterations.
    pub fn sgns_defaults() -> Self {
        TrainingParams {
            dimensionality: 300,
            window: 5,
            negative_samples: 1,
            iterations: 2,
            learning_rate: 0.025,
            min_learning_rate: 1e-4,
            subsample: 0.0,
            rng_seed: 1,
            threads: 1,
        }
    }

    /// Best-performing hierarchical-softmax configuration: d = 600,
    /// window 5, five iterations.
    pub fn sghs_defaults() -> Self {
        TrainingParams {
            dimensionality: 600,
            iterations: 5,
            negative_samples: 0,
            ..Self::sgns_defaults()
        }
    }

    pub fn defaults_for(variant: Variant) -> Self {
        match variant {
            Variant::Sgns => Self::sgns_defaults(),
            Variant::Sghs => Self::sghs_defaults(),
        }
    }

    pub fn validate(&self, variant: Variant) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.dimensionality == 0 {
            return fail("dimensionality must be positive");
        }
        if self.window == 0 {
            return fail("window must be at least 1");
        }
        if self.iterations == 0 {
            return fail("iterations must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning_rate must be positive");
        }
        if !(self.min_learning_rate >= 0.0 && self.min_learning_rate <= self.learning_rate) {
            return fail("min_learning_rate must lie in [0, learning_rate]");
        }
        if !(self.subsample >= 0.0 && self.subsample.is_finite()) {
            return fail("subsample must be non-negative");
        }
        if self.threads == 0 {
            return fail("threads must be at least 1");
        }
        if variant == Variant::Sgns && self.negative_samples == 0 {
            return fail("negative sampling needs at least one negative sample");
        }
        Ok(())
    }
}

impl Default for TrainingParams {
    fn default() -> Self {
        Self::sgns_defaults()
    }
}

/// Trained (or loaded) word vectors.
#[derive(Clone, Debug)]
pub struct EmbeddingModel<T> {
    vocabulary: Vocabulary,
    dim: usize,
    variant: Variant,
    input: Vec<T>,
    /// Context vectors (SGNS) or internal-node vectors (SGHS); empty for
    /// models read from an embedding file.
    output: Vec<T>,
    huffman: Option<HuffmanTree>,
    epoch_losses: Vec<f64>,
}

impl<T: Real> EmbeddingModel<T> {
    /// Wraps existing input vectors (`vocabulary.len() × dim`, row-major).
    pub fn from_vectors(vocabulary: Vocabulary, dim: usize, input: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams(
                "dimensionality must be positive".into(),
            ));
        }
        if input.len() != vocabulary.len() * dim {
            return Err(Error::DimensionMismatch(
                input.len(),
                vocabulary.len() * dim,
            ));
        }
        if input.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite vector component".into()));
        }
        Ok(EmbeddingModel {
            vocabulary,
            dim,
            variant: Variant::Sgns,
            input,
            output: Vec::new(),
            huffman: None,
            epoch_losses: Vec::new(),
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn input_vector(&self, idx: usize) -> &[T] {
        &self.input[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn output_vector(&self, idx: usize) -> Option<&[T]> {
        self.output.get(idx * self.dim..(idx + 1) * self.dim)
    }

    /// Input vector of `word`, if it is in the vocabulary.
    pub fn vector(&self, word: &str) -> Option<&[T]> {
        self.vocabulary.lookup(word).map(|i| self.input_vector(i))
    }

    pub fn input_vectors(&self) -> &[T] {
        &self.input
    }

    pub fn huffman(&self) -> Option<&HuffmanTree> {
        self.huffman.as_ref()
    }

    /// Mean negative log-likelihood per training pair, one entry per epoch.
    pub fn epoch_losses(&self) -> &[f64] {
        &self.epoch_losses
    }

    /// Probability of emitting `target` from the input vector of `center`
    /// under the hierarchical softmax. `None` unless the model was trained
    /// with SGHS in this process.
    pub fn hs_probability(&self, center: usize, target: usize) -> Option<T> {
        let tree = self.huffman.as_ref()?;
        let u = self.input_vector(center);
        let nodes: Vec<&[T]> = tree
            .path(target)
            .iter()
            .map(|&n| self.output_vector(n as usize))
            .collect::<Option<_>>()?;
        Some(sghs_probability(u, &nodes, tree.code(target)))
    }
}
