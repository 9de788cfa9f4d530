//! Date features by shortest dependency distance.

use chrono::NaiveDate;

use super::vote::{majority_vote, Vote};
use crate::corpus::Sentence;
use crate::depgraph::DepGraph;
use crate::embeddings::IndicatorSet;

/// Output of one indicator: the nearest date phrase over the window.
///
/// Every window sentence mentioning the indicator and holding at least one
/// date phrase contributes each phrase's distance (from the closest mention
/// of the indicator to the phrase's head token). The smallest distance wins;
/// equal distances resolve to the earlier calendar date, which keeps the
/// result independent of sentence order.
pub fn indicator_date(
    sentences: &[Sentence],
    graphs: &[DepGraph],
    indicator: &str,
) -> Option<(NaiveDate, usize)> {
    let mut best: Option<(usize, NaiveDate)> = None;
    for (sentence, graph) in sentences.iter().zip(graphs) {
        if sentence.dates.is_empty() {
            continue;
        }
        let distances: Vec<Vec<usize>> = sentence
            .mentions(indicator)
            .filter_map(|m| graph.distances_from(m).ok())
            .collect();
        if distances.is_empty() {
            continue;
        }
        for phrase in &sentence.dates {
            let d = distances
                .iter()
                .map(|dist| dist[phrase.head_token - 1])
                .min()
                .expect("at least one mention");
            let candidate = (d, phrase.normalized);
            if best.is_none_or(|b| candidate < b) {
                best = Some(candidate);
            }
        }
    }
    best.map(|(d, date)| (date, d))
}

/// Extracts one date feature for a case window: each indicator proposes its
/// nearest date and the proposals are combined by majority vote.
pub fn level1_extract(
    sentences: &[Sentence],
    graphs: &[DepGraph],
    indicators: &IndicatorSet,
) -> Option<NaiveDate> {
    let votes: Vec<Vote<NaiveDate>> = indicators
        .indicators
        .iter()
        .enumerate()
        .filter_map(|(rank, word)| {
            indicator_date(sentences, graphs, word).map(|(value, distance)| Vote {
                value,
                rank,
                distance,
            })
        })
        .collect();
    majority_vote(&votes)
}
