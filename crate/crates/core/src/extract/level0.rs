//! Case segmentation from age/gender sentences.

use std::ops::Range;
use std::sync::LazyLock;

use regex::Regex;

use super::features::{Gender, LineListCase};
use crate::corpus::Bulletin;

// Age and gender in one phrase, e.g. "A 60-year-old male".
static AGE_GENDER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\s+(?P<age>\d{1,2})(.{0,20})(\s+|-)(?P<gender>woman|man|male|female|boy|girl|housewife)\b")
        .expect("valid regex")
});

// Age alone, e.g. "35 years old".
static AGE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\s+(?P<age>\d{1,2})\s*years?(\s|-)old").expect("valid regex")
});

// Gender word or pronoun, as a whole word.
static GENDER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\s*\b(?P<gender>woman|man|male|female|boy|girl|housewife|he|she)\b")
        .expect("valid regex")
});

/// Demographics read from one sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Demographics {
    pub age: Option<u32>,
    pub gender: Option<Gender>,
}

impl Demographics {
    /// A sentence starts a new case when both age and gender are present.
    pub fn is_starting(&self) -> bool {
        self.age.is_some() && self.gender.is_some()
    }
}

/// Applies the level-0 regexes to one sentence. The combined age-gender
/// pattern is tried first; only when it fails are age and gender matched
/// separately.
pub fn read_demographics(sentence: &str) -> Demographics {
    if let Some(caps) = AGE_GENDER.captures(sentence) {
        return Demographics {
            age: caps["age"].parse().ok(),
            gender: Gender::from_word(&caps["gender"]),
        };
    }
    let age = AGE.captures(sentence).and_then(|c| c["age"].parse().ok());
    let gender = GENDER
        .captures(sentence)
        .and_then(|c| Gender::from_word(&c["gender"]));
    Demographics { age, gender }
}

/// Sentence range describing one case: from its starting sentence up to the
/// next case's starting sentence or the end of the bulletin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseWindow {
    pub sentences: Range<usize>,
}

/// Finds the cases of a bulletin: one per starting sentence, with age and
/// gender filled in and every other feature null.
pub fn level0_extract(bulletin: &Bulletin) -> Vec<(LineListCase, CaseWindow)> {
    let starts: Vec<(usize, Demographics)> = bulletin
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| (i, read_demographics(&s.text)))
        .filter(|(_, d)| d.is_starting())
        .collect();

    let end = bulletin.sentences.len();
    starts
        .iter()
        .enumerate()
        .map(|(n, &(start, demo))| {
            let stop = starts.get(n + 1).map_or(end, |&(next, _)| next);
            let case = LineListCase {
                bulletin_id: bulletin.id.clone(),
                case_ordinal: n + 1,
                starting_sentence: Some(start),
                age: demo.age,
                gender: demo.gender,
                ..LineListCase::default()
            };
            (
                case,
                CaseWindow {
                    sentences: start..stop,
                },
            )
        })
        .collect()
}
