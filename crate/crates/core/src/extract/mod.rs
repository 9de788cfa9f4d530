//! The three-level extraction engine.
//!
//! Level 0 splits a bulletin into case windows ([`level0_extract`]). Each
//! seeded feature is then resolved per window: dates by dependency distance
//! ([`level1_extract`]) and clinical flags by negation scope
//! ([`level2_extract`]).

mod features;
mod level0;
mod level1;
mod level2;
mod table;
mod vote;

use std::collections::BTreeMap;

use log::{info, warn};
use rayon::prelude::*;

use crate::corpus::{vocabulary_key, Bulletin, Vocabulary};
use crate::depgraph::DepGraph;
use crate::embeddings::{grow_seed, EmbeddingModel, IndicatorSet};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use self::features::{Feature, FeatureSpec, FeatureValue, Gender, LineListCase, YesNo};
pub use self::level0::{level0_extract, read_demographics, CaseWindow, Demographics};
pub use self::level1::{indicator_date, level1_extract};
pub use self::level2::{
    detect_negation, indicator_flag, level2_extract, Negation, NegationLexicon, NegationMode,
};
pub use self::table::{read_csv, read_json, write_csv, write_json, CSV_HEADER};
pub use self::vote::{majority_vote, Vote};

/// A problem with one feature that nulls it for every case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureWarning {
    pub feature: Feature,
    pub message: String,
}

/// Indicator sets for every seeded feature, grown once and reused for all
/// bulletins of a run.
#[derive(Clone, Debug)]
pub struct Extractor {
    indicator_sets: Vec<IndicatorSet>,
    /// Features that stay null (seed missing from the vocabulary).
    disabled: Vec<Feature>,
    lexicon: NegationLexicon,
    mode: NegationMode,
}

impl Extractor {
    /// Grows each seed into `k + 1` indicators using `model`.
    ///
    /// Without a model only `k = 0` is allowed and seeds are used as-is.
    /// Seeds missing from the model vocabulary disable their feature and are
    /// reported as warnings.
    pub fn new<T: Real>(
        specs: &[FeatureSpec],
        model: Option<&EmbeddingModel<T>>,
        k: usize,
        lexicon: NegationLexicon,
    ) -> Result<(Self, Vec<FeatureWarning>)> {
        if model.is_none() && k > 0 {
            return Err(Error::InvalidParams(
                "growing seeds (k > 0) needs an embedding model".into(),
            ));
        }
        let mut indicator_sets = Vec::new();
        let mut disabled = Vec::new();
        let mut warnings = Vec::new();
        for spec in specs {
            let grown = match model {
                Some(m) => grow_seed(m, spec.feature.name(), &spec.seed, k),
                None => Ok(IndicatorSet::seed_only(
                    spec.feature.name(),
                    spec.seed.as_str(),
                )),
            };
            match grown {
                Ok(set) => indicator_sets.push(set),
                Err(Error::OutOfVocabulary(word)) => {
                    let message =
                        format!("seed '{word}' is not in the vocabulary; feature left null");
                    warn!("{}: {message}", spec.feature);
                    disabled.push(spec.feature);
                    warnings.push(FeatureWarning {
                        feature: spec.feature,
                        message,
                    });
                }
                Err(e) => return Err(e),
            }
        }
        let extractor = Extractor {
            indicator_sets,
            disabled,
            lexicon,
            mode: NegationMode::default(),
        };
        Ok((extractor, warnings))
    }

    /// Seed-only extractor (no embedding expansion).
    pub fn seed_only(specs: &[FeatureSpec], lexicon: NegationLexicon) -> Self {
        Extractor {
            indicator_sets: specs
                .iter()
                .map(|s| IndicatorSet::seed_only(s.feature.name(), s.seed.as_str()))
                .collect(),
            disabled: Vec::new(),
            lexicon,
            mode: NegationMode::default(),
        }
    }

    pub fn with_negation_mode(mut self, mode: NegationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn indicator_sets(&self) -> &[IndicatorSet] {
        &self.indicator_sets
    }

    pub fn disabled_features(&self) -> &[Feature] {
        &self.disabled
    }

    /// Extracts every case of one bulletin, ordered by starting sentence.
    pub fn extract(&self, bulletin: &Bulletin) -> Result<Vec<LineListCase>> {
        let cases = level0_extract(bulletin);
        if cases.is_empty() {
            return Ok(Vec::new());
        }
        let graphs = bulletin
            .sentences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                DepGraph::build(&s.tokens).map_err(|e| match e {
                    Error::Structure { message, .. } => Error::Structure {
                        sentence: i,
                        message,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(cases
            .into_iter()
            .map(|(mut case, window)| {
                let range = window.sentences;
                let sentences = &bulletin.sentences[range.clone()];
                let graphs = &graphs[range];
                for set in &self.indicator_sets {
                    let feature: Feature = set.feature.parse().expect("feature name");
                    match feature.level() {
                        1 => case.set_date(feature, level1_extract(sentences, graphs, set)),
                        2 => case.set_flag(
                            feature,
                            level2_extract(sentences, graphs, set, &self.lexicon, self.mode),
                        ),
                        _ => {}
                    }
                }
                case
            })
            .collect())
    }

    /// Extracts all bulletins in parallel. Rows are ordered by bulletin id,
    /// then case ordinal.
    pub fn extract_all(&self, bulletins: &[Bulletin]) -> Result<Vec<LineListCase>> {
        let per_bulletin = bulletins
            .par_iter()
            .map(|b| self.extract(b))
            .collect::<Result<Vec<_>>>()?;
        let mut rows: Vec<LineListCase> = per_bulletin.into_iter().flatten().collect();
        rows.sort_by(|a, b| {
            a.bulletin_id
                .cmp(&b.bulletin_id)
                .then(a.case_ordinal.cmp(&b.case_ordinal))
        });
        Ok(rows)
    }
}

/// Rewrites seeds missing from `vocabulary` to the lemma they carry in the
/// corpus, so that surface-form seeds ("symptoms") can be grown in a
/// lemma-keyed model ("symptom").
///
/// A seed is rewritten only when some token has it as lowercased surface;
/// the most frequent in-vocabulary lemma of those tokens wins, ties going
/// to the alphabetically first. Other seeds are left untouched.
pub fn lemmatize_seeds(
    specs: &[FeatureSpec],
    vocabulary: &Vocabulary,
    bulletins: &[Bulletin],
) -> Vec<FeatureSpec> {
    specs
        .iter()
        .map(|spec| {
            if vocabulary.lookup(&spec.seed).is_some() {
                return spec.clone();
            }
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for token in bulletins
                .iter()
                .flat_map(|b| &b.sentences)
                .flat_map(|s| &s.tokens)
            {
                if token.surface.to_lowercase() == spec.seed {
                    let key = vocabulary_key(&token.lemma);
                    if vocabulary.lookup(&key).is_some() {
                        *counts.entry(key).or_default() += 1;
                    }
                }
            }
            let best = counts
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(lemma, _)| lemma);
            match best {
                Some(lemma) => {
                    info!(
                        "{}: seed '{}' looked up as lemma '{lemma}'",
                        spec.feature, spec.seed
                    );
                    FeatureSpec {
                        feature: spec.feature,
                        seed: lemma,
                    }
                }
                None => spec.clone(),
            }
        })
        .collect()
}

/// One-shot extraction of a single bulletin.
pub fn extract_line_list<T: Real>(
    bulletin: &Bulletin,
    specs: &[FeatureSpec],
    model: Option<&EmbeddingModel<T>>,
    k: usize,
    lexicon: NegationLexicon,
) -> Result<Vec<LineListCase>> {
    let (extractor, _) = Extractor::new(specs, model, k, lexicon)?;
    extractor.extract(bulletin)
}
