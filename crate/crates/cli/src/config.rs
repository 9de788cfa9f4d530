//! TOML run configuration. Command-line flags override every key.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use linelist::embeddings::TrainingParams;
use serde::Deserialize;

use crate::UserError;

/// Overrides for [`TrainingParams`]; unset keys keep the variant defaults.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingOverrides {
    pub dimensionality: Option<usize>,
    pub window: Option<usize>,
    pub negative_samples: Option<usize>,
    pub iterations: Option<usize>,
    pub learning_rate: Option<f64>,
    pub min_learning_rate: Option<f64>,
    pub subsample: Option<f64>,
    pub rng_seed: Option<u64>,
    pub threads: Option<usize>,
}

impl TrainingOverrides {
    pub fn apply(&self, params: &mut TrainingParams) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { params.$field = v; })*
            };
        }
        set!(
            dimensionality,
            window,
            negative_samples,
            iterations,
            learning_rate,
            min_learning_rate,
            subsample,
            rng_seed,
            threads
        );
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub parse_dir: Option<PathBuf>,
    pub corpus_dir: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub k: Option<usize>,
    pub features: Option<PathBuf>,
    pub negation_lexicon: Option<PathBuf>,
    pub deterministic: Option<bool>,
    pub variant: Option<String>,
    pub min_count: Option<usize>,
    #[serde(default)]
    pub training: TrainingOverrides,
}

impl RunConfig {
    /// Loads `path`; relative paths inside it resolve against the
    /// directory holding the file.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        if !path.is_file() {
            return Err(UserError(format!("config file not found: {}", path.display())).into());
        }
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: RunConfig = toml::from_str(&text)
            .map_err(|e| UserError(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for slot in [
            &mut config.parse_dir,
            &mut config.corpus_dir,
            &mut config.model,
            &mut config.gold,
            &mut config.output_dir,
            &mut config.features,
            &mut config.negation_lexicon,
        ] {
            if let Some(p) = slot.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }
}
