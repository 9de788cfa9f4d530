//! Bulletin ingestion: CoNLL-U parses, date phrases and the training vocabulary.

mod conllu;
mod dates;
mod vocab;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use self::conllu::{load_bulletin, parse_conllu, write_conllu, ParsedDocument};
pub use self::dates::{detect_date_phrases, normalize_date};
pub use self::vocab::{build_vocabulary, Vocabulary, DEFAULT_MIN_COUNT};

/// One token of a dependency-parsed sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    /// Index of the governing token, 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl Token {
    pub fn new(
        index: usize,
        surface: impl Into<String>,
        lemma: impl Into<String>,
        head: usize,
        deprel: impl Into<String>,
    ) -> Self {
        Token {
            index,
            surface: surface.into(),
            lemma: lemma.into(),
            head,
            deprel: deprel.into(),
        }
    }

    /// Whether this token mentions `word`: lowercased lemma equality, falling
    /// back to lowercased surface equality.
    pub fn mentions(&self, word: &str) -> bool {
        self.lemma.to_lowercase() == word || self.surface.to_lowercase() == word
    }
}

/// A detected, normalized date phrase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatePhrase {
    /// First token index of the span (1-based, inclusive).
    pub start: usize,
    /// Last token index of the span (inclusive).
    pub end: usize,
    /// Span token whose syntactic head lies outside the span. This token
    /// stands for the whole phrase in graph queries.
    pub head_token: usize,
    pub normalized: NaiveDate,
}

impl DatePhrase {
    pub fn contains(&self, index: usize) -> bool {
        (self.start..=self.end).contains(&index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    /// Raw sentence text, the input of the level-0 regexes.
    pub text: String,
    pub tokens: Vec<Token>,
    pub dates: Vec<DatePhrase>,
}

impl Sentence {
    /// Builds a sentence and runs date detection over it.
    pub fn new(text: impl Into<String>, tokens: Vec<Token>, publication_date: NaiveDate) -> Self {
        let dates = detect_date_phrases(&tokens, publication_date);
        Sentence {
            text: text.into(),
            tokens,
            dates,
        }
    }

    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// Token indices mentioning `word` (already lowercased).
    pub fn mentions<'a>(&'a self, word: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.tokens
            .iter()
            .filter(move |t| t.mentions(word))
            .map(|t| t.index)
    }

    /// Vocabulary keys of the tokens: lowercased lemmas, with any internal
    /// whitespace replaced by `_` so that keys stay single fields on disk.
    pub fn lemmas(&self) -> impl Iterator<Item = String> + '_ {
        self.tokens.iter().map(|t| vocabulary_key(&t.lemma))
    }
}

pub fn vocabulary_key(lemma: &str) -> String {
    lemma
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
}

/// One outbreak bulletin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bulletin {
    pub id: String,
    pub publication_date: NaiveDate,
    pub sentences: Vec<Sentence>,
}

impl Bulletin {
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }
}
