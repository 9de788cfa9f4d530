//! Per-case quality score.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{Feature, LineListCase};

/// Fraction of a gold case's non-null features reproduced by an automated
/// case. Kept as a pair of counts so sums stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QualityScore {
    pub correct: usize,
    pub total: usize,
}

impl QualityScore {
    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.correct as i64, self.total as i64)
    }

    pub fn value(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

/// Whether `auto` reproduces gold's value for `feature`. Gold nulls never
/// count as reproduced.
pub fn feature_correct(auto: &LineListCase, gold: &LineListCase, feature: Feature) -> bool {
    match gold.get(feature) {
        Some(g) => auto.get(feature) == Some(g),
        None => false,
    }
}

/// Quality score of `auto` against `gold`. Errors when every gold feature
/// is null.
pub fn quality_score(auto: &LineListCase, gold: &LineListCase) -> Result<QualityScore> {
    let total = gold.non_null_count();
    if total == 0 {
        return Err(Error::AllNullGold);
    }
    let correct = Feature::ALL
        .iter()
        .filter(|&&f| feature_correct(auto, gold, f))
        .count();
    Ok(QualityScore { correct, total })
}
