//! Scoring an automated line list against a gold list.
//!
//! Cases of each bulletin are paired by a maximum-weight bipartite matching
//! on [`quality_score`]; the report aggregates the matched pairs.

mod matching;
mod quality;
mod report;

use std::borrow::Borrow;
use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::Result;
use crate::extract::{Feature, LineListCase, YesNo};

pub use self::matching::{matching_weight, max_weight_matching};
pub use self::quality::{feature_correct, quality_score, QualityScore};
pub use self::report::{BulletinSummary, ClassF1, EvalReport, FeatureAccuracy, MatchRecord, QsBin};

/// Features scored by accuracy.
pub const ACCURACY_FEATURES: [Feature; 5] = [
    Feature::Age,
    Feature::Gender,
    Feature::OnsetDate,
    Feature::HospitalizationDate,
    Feature::OutcomeDate,
];

/// One matched pair. `auto` and `gold` index the slices given to
/// [`match_bulletin`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Match {
    pub auto: usize,
    pub gold: usize,
    pub qs: QualityScore,
}

/// Maximum-total-QS matching between the cases of one bulletin.
///
/// Every pair is an edge, zero-QS pairs included, so the result has
/// `min(auto.len(), gold.len())` matches. Among optimal matchings the
/// lexicographically lowest (auto index, gold index) assignment wins, so
/// callers should pass cases ordered by case ordinal.
pub fn match_bulletin<A, G>(auto: &[A], gold: &[G]) -> Result<Vec<Match>>
where
    A: Borrow<LineListCase>,
    G: Borrow<LineListCase>,
{
    let scores = auto
        .iter()
        .map(|a| {
            gold.iter()
                .map(|g| quality_score(a.borrow(), g.borrow()))
                .collect()
        })
        .collect::<Result<Vec<Vec<QualityScore>>>>()?;
    let weights: Vec<Vec<Ratio<i64>>> = scores
        .iter()
        .map(|row| row.iter().map(QualityScore::ratio).collect())
        .collect();
    Ok(max_weight_matching(&weights)
        .into_iter()
        .map(|(a, g)| Match {
            auto: a,
            gold: g,
            qs: scores[a][g],
        })
        .collect())
}

/// F1 of `positive` over aligned predictions and gold labels: 2PR/(P+R),
/// and 0 when P+R = 0.
pub fn f1<T: PartialEq>(predictions: &[T], golds: &[T], positive: &T) -> f64 {
    debug_assert_eq!(predictions.len(), golds.len());
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (p, g) in predictions.iter().zip(golds) {
        match (p == positive, g == positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        0.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn by_bulletin(cases: &[LineListCase]) -> BTreeMap<&str, Vec<&LineListCase>> {
    let mut map: BTreeMap<&str, Vec<&LineListCase>> = BTreeMap::new();
    for c in cases {
        map.entry(c.bulletin_id.as_str()).or_default().push(c);
    }
    for list in map.values_mut() {
        list.sort_by_key(|c| c.case_ordinal);
    }
    map
}

struct BulletinResult<'a> {
    id: &'a str,
    auto: Vec<&'a LineListCase>,
    gold: Vec<&'a LineListCase>,
    matches: Vec<Match>,
}

/// Scores `auto` against `gold`, matching cases within each bulletin.
///
/// Gold rows with every feature null cannot be scored; they are dropped and
/// noted in the diagnostics, as are bulletins present in only one list.
pub fn evaluate_corpus(auto: &[LineListCase], gold: &[LineListCase]) -> EvalReport {
    let mut diagnostics = Vec::new();
    let kept_gold: Vec<LineListCase> = gold
        .iter()
        .filter(|g| {
            let keep = g.non_null_count() > 0;
            if !keep {
                diagnostics.push(format!(
                    "gold case {} of bulletin {} has no non-null feature; skipped",
                    g.case_ordinal, g.bulletin_id
                ));
            }
            keep
        })
        .cloned()
        .collect();

    let auto_map = by_bulletin(auto);
    let gold_map = by_bulletin(&kept_gold);
    let mut ids: Vec<&str> = auto_map.keys().chain(gold_map.keys()).copied().collect();
    ids.sort_unstable();
    ids.dedup();

    for &id in &ids {
        match (auto_map.contains_key(id), gold_map.contains_key(id)) {
            (true, false) => diagnostics.push(format!("bulletin {id} has no gold cases")),
            (false, true) => diagnostics.push(format!("bulletin {id} has no automated cases")),
            _ => {}
        }
    }

    let results: Vec<BulletinResult> = ids
        .par_iter()
        .map(|&id| {
            let a: Vec<&LineListCase> = auto_map.get(id).cloned().unwrap_or_default();
            let g: Vec<&LineListCase> = gold_map.get(id).cloned().unwrap_or_default();
            let matches = match_bulletin(&a, &g).expect("all-null gold cases were filtered out");
            BulletinResult {
                id,
                auto: a,
                gold: g,
                matches,
            }
        })
        .collect();

    aggregate(results, diagnostics)
}

/// Predicted and gold labels of one clinical feature, pairwise.
type LabelPairs = (Vec<Option<YesNo>>, Vec<Option<YesNo>>);

fn aggregate(results: Vec<BulletinResult>, diagnostics: Vec<String>) -> EvalReport {
    let mut total_qs = Ratio::<i64>::zero();
    let mut histogram: BTreeMap<Ratio<i64>, usize> = BTreeMap::new();
    let mut accuracy: BTreeMap<Feature, (usize, usize)> = BTreeMap::new();
    let mut labels: BTreeMap<Feature, LabelPairs> = BTreeMap::new();
    let mut bulletins = Vec::new();
    let (mut n_auto, mut n_gold, mut n_matches) = (0, 0, 0);

    for r in &results {
        n_auto += r.auto.len();
        n_gold += r.gold.len();
        n_matches += r.matches.len();
        let mut records = Vec::new();
        for m in &r.matches {
            let (a, g) = (r.auto[m.auto], r.gold[m.gold]);
            total_qs += m.qs.ratio();
            *histogram.entry(m.qs.ratio()).or_default() += 1;
            for f in ACCURACY_FEATURES {
                if g.get(f).is_some() {
                    let entry = accuracy.entry(f).or_default();
                    entry.1 += 1;
                    if feature_correct(a, g, f) {
                        entry.0 += 1;
                    }
                }
            }
            for f in Feature::CLINICAL {
                if let Some(gv) = g.flag(f) {
                    let (preds, golds) = labels.entry(f).or_default();
                    preds.push(a.flag(f));
                    golds.push(Some(gv));
                }
            }
            records.push(MatchRecord {
                auto_case: a.case_ordinal,
                gold_case: g.case_ordinal,
                qs: m.qs.value(),
                correct: m.qs.correct,
                scored: m.qs.total,
            });
        }
        bulletins.push(BulletinSummary {
            bulletin_id: r.id.to_string(),
            auto_cases: r.auto.len(),
            gold_cases: r.gold.len(),
            matches: records,
        });
    }

    let accuracy = ACCURACY_FEATURES
        .iter()
        .map(|&f| {
            let (correct, total) = accuracy.get(&f).copied().unwrap_or_default();
            (f, FeatureAccuracy::new(correct, total))
        })
        .collect();
    let f1_scores = Feature::CLINICAL
        .iter()
        .map(|&f| {
            let (preds, golds) = labels.remove(&f).unwrap_or_default();
            (f, ClassF1::from_labels(&preds, &golds))
        })
        .collect();

    EvalReport {
        gold_cases: n_gold,
        auto_cases: n_auto,
        matches: n_matches,
        average_qs: (n_matches > 0).then(|| ratio_f64(total_qs / n_matches as i64)),
        total_qs: ratio_f64(total_qs),
        accuracy,
        f1: f1_scores,
        qs_histogram: histogram
            .into_iter()
            .map(|(value, count)| QsBin {
                value: ratio_f64(value),
                fraction: format!("{}/{}", value.numer(), value.denom()),
                count,
            })
            .collect(),
        bulletins,
        diagnostics,
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::extract::Gender;

    fn case(id: &str, ordinal: usize, age: u32, flag: YesNo) -> LineListCase {
        LineListCase {
            bulletin_id: id.into(),
            case_ordinal: ordinal,
            age: Some(age),
            gender: Some(if age % 2 == 0 {
                Gender::Male
            } else {
                Gender::Female
            }),
            onset_date: NaiveDate::from_ymd_opt(2014, 5, (age % 28) + 1),
            comorbidities: Some(flag),
            animal_contact: Some(if ordinal % 2 == 0 { YesNo::Y } else { YesNo::N }),
            ..Default::default()
        }
    }

    fn gold_list() -> Vec<LineListCase> {
        vec![
            case("a", 1, 30, YesNo::Y),
            case("a", 2, 41, YesNo::N),
            case("b", 1, 55, YesNo::N),
            case("b", 2, 62, YesNo::Y),
            case("b", 3, 71, YesNo::N),
        ]
    }

    #[test]
    fn f1_examples() {
        use YesNo::*;
        assert_eq!(f1(&[Y, Y, N, N], &[Y, N, Y, N], &Y), 0.5);
        assert_eq!(f1(&[Y, N], &[Y, N], &Y), 1.0);
        assert_eq!(f1(&[N, N], &[Y, N], &Y), 0.0);
    }

    #[test]
    fn match_two_by_two_example() {
        let gold = gold_list();
        let auto = vec![gold[1].clone(), gold[0].clone()];
        let m = match_bulletin(&auto, &gold[..2]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].auto, m[0].gold), (0, 1));
        assert_eq!((m[1].auto, m[1].gold), (1, 0));
        assert!(m.iter().all(|x| x.qs.value() == 1.0));
    }

    #[test]
    fn one_auto_three_gold() {
        let gold = gold_list();
        let auto = vec![gold[3].clone()];
        let m = match_bulletin(&auto, &gold[2..]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].gold, 1);
    }

    #[test]
    fn identical_lists_score_one() {
        let gold = gold_list();
        let report = evaluate_corpus(&gold, &gold);
        assert_eq!(
            (report.gold_cases, report.auto_cases, report.matches),
            (5, 5, 5)
        );
        assert_eq!(report.average_qs, Some(1.0));
        for acc in report.accuracy.values().filter(|a| a.total > 0) {
            assert_eq!(acc.accuracy, Some(1.0));
        }
        assert_eq!(report.accuracy[&Feature::OutcomeDate].accuracy, None);
        for f in [Feature::Comorbidities, Feature::AnimalContact] {
            assert_eq!(report.f1[&f].average, Some(1.0));
        }
        assert!(report.diagnostics.is_empty());
    }

    #[test]
    fn erased_column_scores_zero() {
        let gold = gold_list();
        let mut auto = gold.clone();
        for c in &mut auto {
            c.erase(Feature::OnsetDate);
        }
        let report = evaluate_corpus(&auto, &gold);
        assert_eq!(report.accuracy[&Feature::OnsetDate].accuracy, Some(0.0));
        assert_eq!(report.accuracy[&Feature::Age].accuracy, Some(1.0));
        assert_eq!(report.accuracy[&Feature::Gender].accuracy, Some(1.0));
    }

    #[test]
    fn empty_auto_list() {
        let report = evaluate_corpus(&[], &gold_list());
        assert_eq!(report.matches, 0);
        assert_eq!(report.average_qs, None);
        assert_eq!(report.diagnostics.len(), 2);
    }

    #[test]
    fn one_sided_bulletins_are_diagnosed() {
        let gold = gold_list();
        let mut auto = vec![case("z", 1, 20, YesNo::Y)];
        auto.push(gold[0].clone());
        let report = evaluate_corpus(&auto, &gold);
        assert_eq!(report.matches, 1);
        assert!(report.diagnostics.iter().any(|d| d.contains("bulletin z")));
        assert!(report.diagnostics.iter().any(|d| d.contains("bulletin b")));
    }

    #[test]
    fn all_null_gold_is_skipped() {
        let mut gold = gold_list();
        gold.push(LineListCase {
            bulletin_id: "a".into(),
            case_ordinal: 3,
            ..Default::default()
        });
        let report = evaluate_corpus(&gold_list(), &gold);
        assert_eq!(report.gold_cases, 5);
        assert_eq!(report.diagnostics.len(), 1);
    }

    #[test]
    fn histogram_counts_matches() {
        let gold = gold_list();
        let mut auto = gold.clone();
        auto[0].age = Some(99);
        let report = evaluate_corpus(&auto, &gold);
        let total: usize = report.qs_histogram.iter().map(|b| b.count).sum();
        assert_eq!(total, report.matches);
        assert_eq!(report.qs_histogram[0].fraction, "4/5");
    }
}
