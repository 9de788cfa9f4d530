//! Helpers shared by the integration tests: fixture loading, random
//! generators, and reference implementations written independently of the
//! library code they check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use chrono::{Datelike, NaiveDate};
use linelist::corpus::{load_bulletin, Bulletin, Sentence, Token};
use linelist::extract::{Feature, FeatureSpec, Gender, LineListCase, YesNo};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
}

/// The three-sentence fixture bulletin (demographics, dates, negations).
pub fn fixture_bulletin() -> Bulletin {
    load_bulletin(
        Some(&read_fixture("mers_case.txt")),
        &read_fixture("mers_case.conllu"),
        None,
        None,
    )
    .expect("fixture loads")
}

pub fn fixture_specs() -> Vec<FeatureSpec> {
    let mut specs = FeatureSpec::defaults();
    FeatureSpec::apply_overrides(&mut specs, &read_fixture("features.txt")).unwrap();
    specs
}

// ---------------------------------------------------------------- trees ---

/// Random tree over `n` tokens, returned as a head vector (`heads[i]` is the
/// head of token `i + 1`, 0 for the root).
pub fn random_heads<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    // Attach each node to an earlier one, then relabel at random.
    let mut parent = vec![0usize; n];
    for (i, p) in parent.iter_mut().enumerate().skip(1) {
        *p = rng.gen_range(0..i) + 1;
    }
    let mut label: Vec<usize> = (1..=n).collect();
    label.shuffle(rng);
    let mut heads = vec![0usize; n];
    for i in 0..n {
        let me = label[i];
        heads[me - 1] = if i == 0 { 0 } else { label[parent[i] - 1] };
    }
    heads
}

pub fn tokens_from_heads(heads: &[usize]) -> Vec<Token> {
    heads
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            Token::new(
                i + 1,
                format!("w{}", i + 1),
                format!("w{}", i + 1),
                h,
                "dep",
            )
        })
        .collect()
}

/// All-pairs undirected distances by Floyd–Warshall (1-based, row/col 0
/// unused).
pub fn floyd_warshall(heads: &[usize]) -> Vec<Vec<usize>> {
    let n = heads.len();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n + 1]; n + 1];
    for i in 1..=n {
        d[i][i] = 0;
        let h = heads[i - 1];
        if h > 0 {
            d[i][h] = 1;
            d[h][i] = 1;
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// `reach[a][b]` is true when a directed head→dependent path leads from
/// `a` to `b` (transitive closure, 1-based).
pub fn transitive_closure(heads: &[usize]) -> Vec<Vec<bool>> {
    let n = heads.len();
    let mut reach = vec![vec![false; n + 1]; n + 1];
    for i in 1..=n {
        let h = heads[i - 1];
        if h > 0 {
            reach[h][i] = true;
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            if reach[i][k] {
                for j in 1..=n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

// ------------------------------------------------------------- matching ---

/// Best total over all assignments of the smaller side, and the
/// lexicographically first assignment reaching it. Rows are assigned a
/// column or `None` (only when rows outnumber columns); `None` sorts after
/// every column.
pub fn brute_force_matching<W>(weights: &[Vec<W>]) -> (W, Vec<(usize, usize)>)
where
    W: Copy + PartialOrd + std::ops::Add<Output = W> + num_traits::Zero,
{
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    let size = rows.min(cols);
    let mut best: Option<(W, Vec<Option<usize>>)> = None;
    let mut current = Vec::with_capacity(rows);
    let mut used = vec![false; cols];

    fn recurse<W>(
        weights: &[Vec<W>],
        row: usize,
        size: usize,
        matched: usize,
        acc: W,
        current: &mut Vec<Option<usize>>,
        used: &mut [bool],
        best: &mut Option<(W, Vec<Option<usize>>)>,
    ) where
        W: Copy + PartialOrd + std::ops::Add<Output = W>,
    {
        let rows = weights.len();
        if row == rows {
            if matched == size && best.as_ref().is_none_or(|(b, _)| acc > *b) {
                *best = Some((acc, current.clone()));
            }
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                current.push(Some(c));
                recurse(
                    weights,
                    row + 1,
                    size,
                    matched + 1,
                    acc + weights[row][c],
                    current,
                    used,
                    best,
                );
                current.pop();
                used[c] = false;
            }
        }
        // Leave this row unmatched if the others can still fill the matching.
        if rows - row - 1 >= size - matched {
            current.push(None);
            recurse(weights, row + 1, size, matched, acc, current, used, best);
            current.pop();
        }
    }

    recurse(
        weights,
        0,
        size,
        0,
        W::zero(),
        &mut current,
        &mut used,
        &mut best,
    );
    let (total, assignment) = best.expect("at least one assignment");
    let pairs = assignment
        .into_iter()
        .enumerate()
        .filter_map(|(r, c)| c.map(|c| (r, c)))
        .collect();
    (total, pairs)
}

/// Quality score as (correct, non-null gold) counts, computed field by field.
pub fn reference_qs(auto: &LineListCase, gold: &LineListCase) -> (usize, usize) {
    let mut correct = 0;
    let mut total = 0;
    let mut check = |a: bool, present: bool| {
        if present {
            total += 1;
            if a {
                correct += 1;
            }
        }
    };
    check(auto.age == gold.age, gold.age.is_some());
    check(auto.gender == gold.gender, gold.gender.is_some());
    check(
        auto.onset_date == gold.onset_date,
        gold.onset_date.is_some(),
    );
    check(
        auto.hospitalization_date == gold.hospitalization_date,
        gold.hospitalization_date.is_some(),
    );
    check(
        auto.outcome_date == gold.outcome_date,
        gold.outcome_date.is_some(),
    );
    check(
        auto.animal_contact == gold.animal_contact,
        gold.animal_contact.is_some(),
    );
    check(
        auto.secondary_contact == gold.secondary_contact,
        gold.secondary_contact.is_some(),
    );
    check(
        auto.comorbidities == gold.comorbidities,
        gold.comorbidities.is_some(),
    );
    check(
        auto.specified_hcw == gold.specified_hcw,
        gold.specified_hcw.is_some(),
    );
    (correct, total)
}

// ------------------------------------------------------------ line lists ---

fn maybe<R: Rng, T>(rng: &mut R, p_null: f64, f: impl FnOnce(&mut R) -> T) -> Option<T> {
    if rng.gen_bool(p_null) {
        None
    } else {
        Some(f(rng))
    }
}

/// A random case drawn from a small value space, so that coincidences
/// (and therefore matching ties) are common.
pub fn random_case<R: Rng>(
    rng: &mut R,
    bulletin: &str,
    ordinal: usize,
    p_null: f64,
) -> LineListCase {
    let base = NaiveDate::from_ymd_opt(2015, 5, 1).unwrap();
    let date = |rng: &mut R| base + chrono::Duration::days(rng.gen_range(0..4));
    let flag = |rng: &mut R| {
        if rng.gen_bool(0.5) {
            YesNo::Y
        } else {
            YesNo::N
        }
    };
    LineListCase {
        bulletin_id: bulletin.into(),
        case_ordinal: ordinal,
        starting_sentence: None,
        age: maybe(rng, p_null, |r| r.gen_range(30..34)),
        gender: maybe(rng, p_null, |r| {
            if r.gen_bool(0.5) {
                Gender::Male
            } else {
                Gender::Female
            }
        }),
        onset_date: maybe(rng, p_null, date),
        hospitalization_date: maybe(rng, p_null, date),
        outcome_date: maybe(rng, p_null, date),
        animal_contact: maybe(rng, p_null, flag),
        secondary_contact: maybe(rng, p_null, flag),
        comorbidities: maybe(rng, p_null, flag),
        specified_hcw: maybe(rng, p_null, flag),
    }
}

// ----------------------------------------------------- synthetic corpus ---

const MONTHS: [&str; 11] = [
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
];

/// A planted case: what a correct extraction must find.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedCase {
    pub start: usize,
    pub age: u32,
    pub gender: Gender,
}

#[derive(Clone, Debug)]
pub struct SyntheticBulletin {
    pub bulletin: Bulletin,
    pub cases: Vec<PlantedCase>,
}

/// Sentence builder: nodes are named, heads refer to names ("" = root).
struct Builder {
    nodes: Vec<(String, String, String, String)>,
}

impl Builder {
    fn new() -> Self {
        Builder { nodes: Vec::new() }
    }

    fn add(&mut self, surface: &str, lemma: &str, name: &str, head: &str) -> &mut Self {
        self.nodes
            .push((surface.into(), lemma.into(), name.into(), head.into()));
        self
    }

    fn build(&self, publication_date: NaiveDate) -> Sentence {
        let index: HashMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.2.as_str(), i + 1))
            .collect();
        let tokens: Vec<Token> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, (surface, lemma, _, head))| {
                let h = if head.is_empty() {
                    0
                } else {
                    index[head.as_str()]
                };
                Token::new(i + 1, surface.as_str(), lemma.as_str(), h, "dep")
            })
            .collect();
        let text = tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        Sentence::new(text, tokens, publication_date)
    }
}

/// Adds a date under `head`, as one token ("4-June") or two ("4 June").
fn add_date<R: Rng>(rng: &mut R, b: &mut Builder, name: &str, head: &str) {
    let day = rng.gen_range(1..=28);
    let month = MONTHS[rng.gen_range(0..MONTHS.len())];
    if rng.gen_bool(0.5) {
        let s = format!("{day}-{month}");
        b.add(&s, &s, name, head);
    } else {
        let num = format!("{name}_day");
        b.add(&day.to_string(), &day.to_string(), &num, name);
        b.add(month, month, name, head);
    }
}

fn gender_word<R: Rng>(rng: &mut R, gender: Gender) -> &'static str {
    let words: &[&str] = match gender {
        Gender::Male => &["male", "man", "boy"],
        Gender::Female => &["female", "woman", "girl", "housewife"],
    };
    words[rng.gen_range(0..words.len())]
}

fn pronoun(gender: Gender) -> &'static str {
    match gender {
        Gender::Male => "He",
        Gender::Female => "She",
    }
}

fn starting_sentence<R: Rng>(
    rng: &mut R,
    age: u32,
    gender: Gender,
    pub_date: NaiveDate,
) -> Sentence {
    let mut b = Builder::new();
    let cities = ["Riyadh", "Jeddah", "Taif", "Hofuf"];
    match rng.gen_range(0..3) {
        0 => {
            let adj = format!("{age}-year-old");
            let g = gender_word(rng, gender);
            b.add("A", "a", "det", "n")
                .add(&adj, &adj, "amod", "n")
                .add(g, g, "n", "v")
                .add("from", "from", "case", "city")
                .add(cities[rng.gen_range(0..cities.len())], "city", "city", "n")
                .add("was", "be", "aux", "v")
                .add("reported", "report", "v", "")
                .add(".", ".", "punct", "v");
        }
        1 => {
            let age_s = age.to_string();
            b.add(
                pronoun(gender),
                &pronoun(gender).to_lowercase(),
                "subj",
                "old",
            )
            .add("is", "be", "cop", "old")
            .add(&age_s, &age_s, "num", "years")
            .add("years", "year", "years", "old")
            .add("old", "old", "old", "")
            .add(".", ".", "punct", "old");
        }
        _ => {
            let age_s = age.to_string();
            let g = gender_word(rng, gender);
            b.add("The", "the", "det", "patient")
                .add("patient", "patient", "patient", "n")
                .add("is", "be", "cop", "n")
                .add("a", "a", "a", "n")
                .add(&age_s, &age_s, "num", "years")
                .add("years", "year", "years", "old")
                .add("old", "old", "old", "n")
                .add(g, g, "n", "")
                .add(".", ".", "punct", "n");
        }
    }
    b.build(pub_date)
}

/// Indicator vocabulary of the synthetic corpus; the first word of each
/// list is the seed used by [`synthetic_specs`].
pub const ONSET_WORDS: [&str; 2] = ["symptoms", "fever"];
pub const ADMIT_WORDS: [&str; 2] = ["admitted", "hospitalized"];

pub fn synthetic_specs() -> Vec<FeatureSpec> {
    [
        (Feature::OnsetDate, "symptoms"),
        (Feature::HospitalizationDate, "admitted"),
        (Feature::OutcomeDate, "died"),
        (Feature::AnimalContact, "animals"),
        (Feature::SecondaryContact, "contact"),
        (Feature::Comorbidities, "comorbidities"),
        (Feature::SpecifiedHcw, "healthcare"),
    ]
    .into_iter()
    .map(|(f, s)| FeatureSpec::new(f, s).unwrap())
    .collect()
}

fn follow_up<R: Rng>(rng: &mut R, gender: Gender, pub_date: NaiveDate) -> Sentence {
    let pron = pronoun(gender);
    let mut b = Builder::new();
    match rng.gen_range(0..5) {
        0 => {
            let sym = ONSET_WORDS[rng.gen_range(0..2)];
            let adm = ADMIT_WORDS[rng.gen_range(0..2)];
            b.add(pron, &pron.to_lowercase(), "subj", "dev")
                .add("developed", "develop", "dev", "")
                .add(sym, sym, "sym", "dev")
                .add("on", "on", "on1", "dev");
            add_date(rng, &mut b, "d1", "on1");
            b.add("and", "and", "cc", "dev")
                .add("was", "be", "aux", "adm")
                .add(adm, adm, "adm", "dev")
                .add("to", "to", "to", "adm")
                .add("hospital", "hospital", "hosp", "to")
                .add("on", "on", "on2", "adm");
            add_date(rng, &mut b, "d2", "on2");
            b.add(".", ".", "punct", "dev");
        }
        1 => {
            b.add(pron, &pron.to_lowercase(), "subj", "had");
            b.add("had", "have", "had", "");
            if rng.gen_bool(0.5) {
                b.add("no", "no", "neg1", "com");
            }
            b.add("comorbidities", "comorbidity", "com", "had")
                .add("and", "and", "cc", "had")
                .add("had", "have", "had2", "had");
            if rng.gen_bool(0.5) {
                b.add("no", "no", "neg2", "contact");
            }
            b.add("contact", "contact", "contact", "had2")
                .add("with", "with", "with", "contact")
                .add("animals", "animal", "animals", "with")
                .add(".", ".", "punct", "had");
        }
        2 => {
            b.add(pron, &pron.to_lowercase(), "subj", "died")
                .add("died", "die", "died", "")
                .add("on", "on", "on", "died");
            add_date(rng, &mut b, "d", "on");
            b.add(".", ".", "punct", "died");
        }
        3 => {
            b.add(pron, &pron.to_lowercase(), "subj", "worker")
                .add("is", "be", "cop", "worker");
            if rng.gen_bool(0.5) {
                b.add("not", "not", "neg", "worker");
            }
            b.add("a", "a", "det", "worker")
                .add("healthcare", "healthcare", "hc", "worker")
                .add("worker", "worker", "worker", "")
                .add(".", ".", "punct", "worker");
        }
        _ => {
            b.add("The", "the", "det", "inv")
                .add("investigation", "investigation", "inv", "ongo")
                .add("is", "be", "aux", "ongo")
                .add("ongoing", "ongoing", "ongo", "")
                .add(".", ".", "punct", "ongo");
        }
    }
    b.build(pub_date)
}

/// A bulletin with 1–4 planted cases, each followed by 0–4 follow-up
/// sentences, optionally preceded by filler.
pub fn synthetic_bulletin<R: Rng>(rng: &mut R, id: &str) -> SyntheticBulletin {
    let pub_date = NaiveDate::from_ymd_opt(rng.gen_range(2013..2017), 12, 15).unwrap();
    let mut sentences = Vec::new();
    let mut cases = Vec::new();
    if rng.gen_bool(0.3) {
        let mut b = Builder::new();
        b.add("Cases", "case", "n", "r")
            .add("were", "be", "aux", "r")
            .add("reported", "report", "r", "")
            .add(".", ".", "p", "r");
        sentences.push(b.build(pub_date));
    }
    for _ in 0..rng.gen_range(1..=4) {
        let age = rng.gen_range(1..=99);
        let gender = if rng.gen_bool(0.5) {
            Gender::Male
        } else {
            Gender::Female
        };
        cases.push(PlantedCase {
            start: sentences.len(),
            age,
            gender,
        });
        sentences.push(starting_sentence(rng, age, gender, pub_date));
        for _ in 0..rng.gen_range(0..=4) {
            sentences.push(follow_up(rng, gender, pub_date));
        }
    }
    debug_assert!(pub_date.year() >= 2013);
    SyntheticBulletin {
        bulletin: Bulletin {
            id: id.to_string(),
            publication_date: pub_date,
            sentences,
        },
        cases,
    }
}

pub fn synthetic_corpus<R: Rng>(rng: &mut R, n: usize) -> Vec<SyntheticBulletin> {
    (0..n)
        .map(|i| synthetic_bulletin(rng, &format!("syn-{i:04}")))
        .collect()
}

// ------------------------------------------------ seed-only reference ---

fn mentions(token: &Token, word: &str) -> bool {
    token.lemma.to_lowercase() == word || token.surface.to_lowercase() == word
}

/// Seed-only level-1 reference: nearest date phrase (by Floyd–Warshall
/// distance from any seed mention to the phrase head), earlier date on ties.
pub fn reference_date(sentences: &[Sentence], seed: &str) -> Option<NaiveDate> {
    let mut best: Option<(usize, NaiveDate)> = None;
    for s in sentences {
        let heads: Vec<usize> = s.tokens.iter().map(|t| t.head).collect();
        let d = floyd_warshall(&heads);
        let hits: Vec<usize> = s
            .tokens
            .iter()
            .filter(|t| mentions(t, seed))
            .map(|t| t.index)
            .collect();
        for phrase in &s.dates {
            for &m in &hits {
                let cand = (d[m][phrase.head_token], phrase.normalized);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    best.map(|(_, date)| date)
}

/// Seed-only level-2 reference: first sentence and first token mentioning
/// the seed; N when a cue neighbors it or neighbors one of its ancestors.
pub fn reference_flag(
    sentences: &[Sentence],
    seed: &str,
    cues: &BTreeSet<String>,
) -> Option<YesNo> {
    for s in sentences {
        let Some(node) = s.tokens.iter().find(|t| mentions(t, seed)).map(|t| t.index) else {
            continue;
        };
        let heads: Vec<usize> = s.tokens.iter().map(|t| t.head).collect();
        let d = floyd_warshall(&heads);
        let reach = transitive_closure(&heads);
        let is_cue = |i: usize| {
            let t = &s.tokens[i - 1];
            cues.contains(&t.lemma.to_lowercase()) || cues.contains(&t.surface.to_lowercase())
        };
        let n = heads.len();
        let near_cue = |x: usize| (1..=n).any(|y| d[x][y] == 1 && is_cue(y));
        let ancestors = (1..=n).filter(|&a| reach[a][node]);
        let negated = near_cue(node) || ancestors.into_iter().any(near_cue);
        return Some(if negated { YesNo::N } else { YesNo::Y });
    }
    None
}

/// Case rows for one bulletin using planted case windows and the seed-only
/// references.
pub fn reference_rows(
    syn: &SyntheticBulletin,
    specs: &[FeatureSpec],
    cues: &BTreeSet<String>,
) -> Vec<LineListCase> {
    let n = syn.bulletin.sentences.len();
    syn.cases
        .iter()
        .enumerate()
        .map(|(i, planted)| {
            let stop = syn.cases.get(i + 1).map_or(n, |c| c.start);
            let window = &syn.bulletin.sentences[planted.start..stop];
            let mut row = LineListCase {
                bulletin_id: syn.bulletin.id.clone(),
                case_ordinal: i + 1,
                starting_sentence: Some(planted.start),
                age: Some(planted.age),
                gender: Some(planted.gender),
                ..Default::default()
            };
            for spec in specs {
                if spec.feature.is_date() {
                    row.set_date(spec.feature, reference_date(window, &spec.seed));
                } else {
                    row.set_flag(spec.feature, reference_flag(window, &spec.seed, cues));
                }
            }
            row
        })
        .collect()
}

/// Two-cluster toy corpus: each sentence draws its words from one cluster.
pub fn two_cluster_corpus<R: Rng>(
    rng: &mut R,
    sentences: usize,
    words: usize,
) -> (Vec<Vec<String>>, Vec<String>, Vec<String>) {
    let a: Vec<String> = (0..words).map(|i| format!("alpha{i}")).collect();
    let b: Vec<String> = (0..words).map(|i| format!("beta{i}")).collect();
    let corpus = (0..sentences)
        .map(|i| {
            let cluster = if i % 2 == 0 { &a } else { &b };
            (0..10)
                .map(|_| cluster[rng.gen_range(0..cluster.len())].clone())
                .collect()
        })
        .collect();
    (corpus, a, b)
}
