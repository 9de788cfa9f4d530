mod common;

use chrono::{Datelike, NaiveDate};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linelist::corpus::{build_vocabulary, detect_date_phrases, Sentence, Token};
use linelist::depgraph::DepGraph;
use linelist::extract::{
    indicator_date, indicator_flag, level0_extract, majority_vote, read_demographics, Feature,
    NegationLexicon, NegationMode, Vote, YesNo,
};
use linelist::infer::{demographic_distribution, interval_distribution};

use common::*;

fn graphs(sentences: &[Sentence]) -> Vec<DepGraph> {
    sentences
        .iter()
        .map(|s| DepGraph::build(&s.tokens).unwrap())
        .collect()
}

const MONTHS: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

proptest! {
    #[test]
    fn windows_are_disjoint_and_cover_the_tail(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let syn = synthetic_bulletin(&mut rng, "w");
        let n = syn.bulletin.sentences.len();
        let windows: Vec<_> = level0_extract(&syn.bulletin).into_iter().map(|(_, w)| w.sentences).collect();
        let starts: Vec<usize> = syn
            .bulletin
            .sentences
            .iter()
            .enumerate()
            .filter(|(_, s)| read_demographics(&s.text).is_starting())
            .map(|(i, _)| i)
            .collect();
        prop_assert_eq!(windows.len(), starts.len());
        if let Some(&first) = starts.first() {
            // Consecutive, non-overlapping, first start to the end.
            prop_assert_eq!(windows[0].start, first);
            for pair in windows.windows(2) {
                prop_assert_eq!(pair[0].end, pair[1].start);
                prop_assert!(pair[0].start < pair[0].end);
            }
            prop_assert_eq!(windows.last().unwrap().end, n);
        }
    }

    #[test]
    fn level1_ignores_sentence_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let syn = synthetic_bulletin(&mut rng, "p");
        let mut sentences = syn.bulletin.sentences.clone();
        let before = graphs(&sentences);
        let words: Vec<&str> = ONSET_WORDS.into_iter().chain(ADMIT_WORDS).collect();
        let expected: Vec<_> = words.iter().map(|w| indicator_date(&sentences, &before, w)).collect();
        sentences.shuffle(&mut rng);
        let after = graphs(&sentences);
        let got: Vec<_> = words.iter().map(|w| indicator_date(&sentences, &after, w)).collect();
        prop_assert_eq!(expected, got);
    }

    #[test]
    fn indirect_negation_only_adds_no(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let syn = synthetic_bulletin(&mut rng, "n");
        let lexicon = NegationLexicon::default();
        for (_, window) in level0_extract(&syn.bulletin) {
            let sentences = &syn.bulletin.sentences[window.sentences];
            let g = graphs(sentences);
            for seed in ["animals", "contact", "comorbidities", "healthcare"] {
                let direct = indicator_flag(sentences, &g, seed, &lexicon, NegationMode { indirect: false });
                let both = indicator_flag(sentences, &g, seed, &lexicon, NegationMode { indirect: true });
                prop_assert_eq!(direct.is_some(), both.is_some());
                if direct == Some(YesNo::N) {
                    prop_assert_eq!(both, direct);
                }
            }
        }
    }

    #[test]
    fn vote_ignores_input_order(raw in prop::collection::vec((0u8..4, 0usize..3, 0usize..5), 0..12), seed in any::<u64>()) {
        let votes: Vec<Vote<u8>> = raw.iter().map(|&(value, rank, distance)| Vote { value, rank, distance }).collect();
        let mut shuffled = votes.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(majority_vote(&votes), majority_vote(&shuffled));
        prop_assert_eq!(majority_vote(&votes).is_none(), votes.is_empty());
    }

    #[test]
    fn explicit_years_are_kept(days in 0i64..9000, pub_offset in -400i64..400, style in 0usize..3) {
        let date = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap() + chrono::Duration::days(days);
        let publication = date + chrono::Duration::days(pub_offset);
        let month = MONTHS[date.month0() as usize];
        let words: Vec<String> = match style {
            0 => vec![date.day().to_string(), month.to_string(), date.year().to_string()],
            1 => vec![format!("{}th", date.day()), "of".into(), month.to_string(), date.year().to_string()],
            _ => vec![date.format("%Y-%m-%d").to_string()],
        };
        // "on" <- date tokens, chained left to right under the first one.
        let mut tokens = vec![Token::new(1, "on", "on", 0, "root")];
        for (i, w) in words.iter().enumerate() {
            tokens.push(Token::new(i + 2, w.as_str(), w.to_lowercase(), if i == 0 { 1 } else { 2 }, "dep"));
        }
        let phrases = detect_date_phrases(&tokens, publication);
        prop_assert_eq!(phrases.len(), 1);
        prop_assert_eq!(phrases[0].normalized, date);
    }

    #[test]
    fn vocabulary_counts_bounded_by_tokens(seed in any::<u64>(), min_count in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let corpus: Vec<_> = synthetic_corpus(&mut rng, 4).into_iter().map(|s| s.bulletin).collect();
        let tokens: usize = corpus.iter().map(|b| b.token_count()).sum();
        if let Ok(vocab) = build_vocabulary(&corpus, min_count) {
            let total: u64 = vocab.counts().iter().sum();
            prop_assert!(total as usize <= tokens);
            prop_assert!(vocab.counts().iter().all(|&c| c as usize >= min_count));
        }
    }

    #[test]
    fn histograms_conserve_cases(seed in any::<u64>(), n in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cases: Vec<_> = (0..n)
            .map(|i| {
                let p_null = rng.gen_range(0.0..0.8);
                random_case(&mut rng, "h", i + 1, p_null)
            })
            .collect();
        let (ages, genders) = demographic_distribution(&cases);
        prop_assert_eq!(ages.total(), n);
        prop_assert_eq!(genders.male + genders.female + genders.null, n);
        let hist = interval_distribution(&cases, Feature::OnsetDate, Feature::HospitalizationDate).unwrap();
        prop_assert_eq!(hist.total(), n);
    }

    #[test]
    fn neighbor_relation_is_symmetric(n in 1usize..=12, seed in any::<u64>()) {
        let heads = random_heads(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let g = DepGraph::build(&tokens_from_heads(&heads)).unwrap();
        for a in 1..=n {
            for b in g.neighbors(a).unwrap() {
                prop_assert!(g.neighbors(b).unwrap().contains(&a));
            }
        }
    }
}
