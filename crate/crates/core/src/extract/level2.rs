//! Clinical Y/N features by dependency-scoped negation detection.

use std::collections::BTreeSet;

use super::features::YesNo;
use super::vote::{majority_vote, Vote};
use crate::corpus::{Sentence, Token};
use crate::depgraph::DepGraph;
use crate::embeddings::IndicatorSet;

const DEFAULT_CUES: &str = include_str!("../../data/negation_cues.txt");

/// Static list of negation cues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegationLexicon {
    cues: BTreeSet<String>,
}

impl NegationLexicon {
    /// One cue per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let cues = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        NegationLexicon { cues }
    }

    pub fn from_cues<I, S>(cues: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        NegationLexicon {
            cues: cues
                .into_iter()
                .map(|c| c.as_ref().to_lowercase())
                .collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.cues.contains(word)
    }

    pub fn is_cue(&self, token: &Token) -> bool {
        self.contains(&token.lemma.to_lowercase()) || self.contains(&token.surface.to_lowercase())
    }

    pub fn cues(&self) -> impl Iterator<Item = &str> {
        self.cues.iter().map(String::as_str)
    }
}

impl Default for NegationLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_CUES)
    }
}

/// Which negation checks level 2 runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NegationMode {
    /// Also look for cues around the indicator's predecessors.
    pub indirect: bool,
}

impl Default for NegationMode {
    fn default() -> Self {
        NegationMode { indirect: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Negation {
    Direct,
    Indirect,
}

/// Negation affecting token `node`: a cue among its neighbors (direct), or
/// a cue among the neighbors of one of its predecessors (indirect).
pub fn detect_negation(
    sentence: &Sentence,
    graph: &DepGraph,
    node: usize,
    lexicon: &NegationLexicon,
    mode: NegationMode,
) -> Option<Negation> {
    let is_cue = |n: usize| sentence.token(n).is_some_and(|t| lexicon.is_cue(t));
    let neighbors = graph.neighbors(node).ok()?;
    if neighbors.into_iter().any(is_cue) {
        return Some(Negation::Direct);
    }
    if mode.indirect {
        for p in graph.predecessors(node).ok()? {
            if graph.neighbors(p).ok()?.into_iter().any(is_cue) {
                return Some(Negation::Indirect);
            }
        }
    }
    None
}

/// Output of one indicator: classification in the first window sentence
/// mentioning it, or `None` if no sentence does.
pub fn indicator_flag(
    sentences: &[Sentence],
    graphs: &[DepGraph],
    indicator: &str,
    lexicon: &NegationLexicon,
    mode: NegationMode,
) -> Option<YesNo> {
    sentences.iter().zip(graphs).find_map(|(sentence, graph)| {
        let node = sentence.mentions(indicator).next()?;
        Some(
            match detect_negation(sentence, graph, node, lexicon, mode) {
                Some(_) => YesNo::N,
                None => YesNo::Y,
            },
        )
    })
}

/// Classifies one clinical feature for a case window by majority vote over
/// the indicators' outputs.
pub fn level2_extract(
    sentences: &[Sentence],
    graphs: &[DepGraph],
    indicators: &IndicatorSet,
    lexicon: &NegationLexicon,
    mode: NegationMode,
) -> Option<YesNo> {
    let votes: Vec<Vote<YesNo>> = indicators
        .indicators
        .iter()
        .enumerate()
        .filter_map(|(rank, word)| {
            indicator_flag(sentences, graphs, word, lexicon, mode).map(|value| Vote {
                value,
                rank,
                distance: 0,
            })
        })
        .collect();
    majority_vote(&votes)
}
