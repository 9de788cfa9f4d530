use std::sync::LazyLock;

use chrono::{Datelike, NaiveDate};
use regex::{Captures, Regex};

use super::{DatePhrase, Token};
use crate::error::{Error, Result};

const MONTH: &str = "january|february|march|april|may|june|july|august|september|october|\
november|december|jan|feb|mar|apr|jun|jul|aug|sept|sep|oct|nov|dec";

// Day-month with optional year ("4-June", "4 June 2014", "23rd January 2016",
// "4th of June") and ISO dates ("2014-06-04").
static DATE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?i)\b(?:(?P<iy>\d{{4}})-(?P<im>\d{{1,2}})-(?P<id>\d{{1,2}})|(?P<day>\d{{1,2}})(?:st|nd|rd|th)?(?:\s+of)?[\s-]+(?P<month>{MONTH})\.?(?:[\s,-]+(?P<year>\d{{4}}))?)\b"
    ))
    .expect("valid date pattern")
});

static DATE_EXACT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(&format!(r"^(?:{})$", DATE.as_str())).expect("valid pattern"));

fn month_number(name: &str) -> Option<u32> {
    let name = name.to_ascii_lowercase();
    let prefix = name.get(..3)?;
    let m = match prefix {
        "jan" => 1,
        "feb" => 2,
        "mar" => 3,
        "apr" => 4,
        "may" => 5,
        "jun" => 6,
        "jul" => 7,
        "aug" => 8,
        "sep" => 9,
        "oct" => 10,
        "nov" => 11,
        "dec" => 12,
        _ => return None,
    };
    Some(m)
}

fn resolve(caps: &Captures<'_>, raw: &str, publication_date: NaiveDate) -> Result<NaiveDate> {
    let num = |name: &str| caps.name(name).and_then(|m| m.as_str().parse::<u32>().ok());
    let invalid = || Error::DateNormalization(raw.to_string());

    if let (Some(y), Some(m), Some(d)) = (num("iy"), num("im"), num("id")) {
        return NaiveDate::from_ymd_opt(y as i32, m, d).ok_or_else(invalid);
    }
    let day = num("day").ok_or_else(invalid)?;
    let month = caps
        .name("month")
        .and_then(|m| month_number(m.as_str()))
        .ok_or_else(invalid)?;
    match num("year") {
        Some(year) => NaiveDate::from_ymd_opt(year as i32, month, day).ok_or_else(invalid),
        None => complete_year(month, day, publication_date).ok_or_else(invalid),
    }
}

/// Latest year in which `month/day` exists and does not exceed `reference`.
fn complete_year(month: u32, day: u32, reference: NaiveDate) -> Option<NaiveDate> {
    // Feb 29 needs up to eight years of look-back (e.g. across 1900/2100).
    (0..=8)
        .filter_map(|back| NaiveDate::from_ymd_opt(reference.year() - back, month, day))
        .find(|d| *d <= reference)
}

/// Normalizes one date phrase to a calendar date. Year-less dates take the
/// latest year that keeps them on or before `publication_date`.
pub fn normalize_date(raw_phrase_text: &str, publication_date: NaiveDate) -> Result<NaiveDate> {
    let raw = raw_phrase_text.trim();
    let caps = DATE_EXACT
        .captures(raw)
        .ok_or_else(|| Error::DateNormalization(raw.to_string()))?;
    resolve(&caps, raw, publication_date)
}

/// Finds date phrases over the surface tokens of one sentence.
///
/// Tokens are joined with single spaces and matched against the date pattern
/// catalog; each match is mapped back to the tokens it touches. Matches that
/// fail normalization (e.g. "31 February") are dropped.
pub fn detect_date_phrases(tokens: &[Token], publication_date: NaiveDate) -> Vec<DatePhrase> {
    let mut text = String::new();
    let mut offsets = Vec::with_capacity(tokens.len());
    for (i, token) in tokens.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        let start = text.len();
        text.push_str(&token.surface);
        offsets.push((start, text.len()));
    }

    let mut phrases = Vec::new();
    for caps in DATE.captures_iter(&text) {
        let whole = caps.get(0).expect("group 0");
        let Ok(normalized) = resolve(&caps, whole.as_str(), publication_date) else {
            continue;
        };
        let touched: Vec<usize> = offsets
            .iter()
            .enumerate()
            .filter(|(_, &(s, e))| s < whole.end() && e > whole.start())
            .map(|(i, _)| i)
            .collect();
        let (Some(&first), Some(&last)) = (touched.first(), touched.last()) else {
            continue;
        };
        let start = tokens[first].index;
        let end = tokens[last].index;
        let span = start..=end;
        let head_token = tokens[first..=last]
            .iter()
            .find(|t| !span.contains(&t.head))
            .map_or(start, |t| t.index);
        phrases.push(DatePhrase {
            start,
            end,
            head_token,
            normalized,
        });
    }
    phrases
}
