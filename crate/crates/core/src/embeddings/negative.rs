use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};

const POWER: f64 = 0.75;

/// Negative-sampling distribution proportional to `count^0.75`.
#[derive(Clone, Debug)]
pub struct NegativeTable {
    dist: WeightedIndex<f64>,
    probabilities: Vec<f64>,
}

impl NegativeTable {
    pub fn new(counts: &[u64]) -> Result<Self> {
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(POWER)).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| {
            Error::InvalidParams(format!("cannot build negative-sampling table: {e}"))
        })?;
        let total: f64 = weights.iter().sum();
        let probabilities = weights.iter().map(|w| w / total).collect();
        Ok(NegativeTable {
            dist,
            probabilities,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }

    /// Target probability of each word.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}
