use std::collections::HashMap;

use super::Bulletin;
use crate::error::{Error, Result};

pub const DEFAULT_MIN_COUNT: usize = 5;

/// Lowercased lemma vocabulary with exact occurrence counts.
///
/// Words are ordered by descending count, ties by ascending word, so the
/// index of a word is stable for a given corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
    min_count: usize,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from raw `(word, count)` pairs, dropping words
    /// below `min_count`. Duplicate words are merged.
    pub fn from_counts<I, S>(counts: I, min_count: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (word, count) in counts {
            *merged.entry(word.into()).or_default() += count;
        }
        let mut entries: Vec<(String, u64)> = merged
            .into_iter()
            .filter(|(_, c)| *c >= min_count as u64)
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary(min_count));
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let (words, counts): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        Ok(Self::assemble(words, counts, min_count))
    }

    /// Vocabulary over a fixed word list without count information, as read
    /// back from an embedding file. Counts are zero and word order is kept.
    pub fn from_words(words: Vec<String>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyVocabulary(0));
        }
        let counts = vec![0; words.len()];
        let vocab = Self::assemble(words, counts, 0);
        if vocab.index.len() != vocab.words.len() {
            return Err(Error::InvalidParams("duplicate word in vocabulary".into()));
        }
        Ok(vocab)
    }

    fn assemble(words: Vec<String>, counts: Vec<u64>, min_count: usize) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vocabulary {
            words,
            counts,
            min_count,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn lookup(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, idx: usize) -> &str {
        &self.words[idx]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, idx: usize) -> u64 {
        self.counts[idx]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    /// Maps a sequence of words to vocabulary indices, dropping unknown words.
    pub fn encode<'a, I>(&self, words: I) -> Vec<usize>
    where
        I: IntoIterator<Item = &'a str>,
    {
        words.into_iter().filter_map(|w| self.lookup(w)).collect()
    }
}

/// Counts lowercased lemmas over all sentences of `corpus`.
pub fn build_vocabulary(corpus: &[Bulletin], min_count: usize) -> Result<Vocabulary> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for sentence in corpus.iter().flat_map(|b| &b.sentences) {
        for lemma in sentence.lemmas() {
            *counts.entry(lemma).or_default() += 1;
        }
    }
    Vocabulary::from_counts(counts, min_count)
}
