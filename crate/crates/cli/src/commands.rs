use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use log::{info, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use linelist::corpus::{
    build_vocabulary, load_bulletin, parse_conllu, Bulletin, DEFAULT_MIN_COUNT,
};
use linelist::embeddings::{
    nearest, read_word2vec, train as train_model, write_word2vec, TrainingParams, Variant,
};
use linelist::eval::evaluate_corpus;
use linelist::extract::{
    self as ll, Extractor, Feature, FeatureSpec, LineListCase, NegationLexicon,
};
use linelist::infer::{demographic_distribution, interval_distribution};
use linelist::EmbeddingModel32;

use crate::config::RunConfig;
use crate::{
    CorpusArgs, EvaluateArgs, ExtractArgs, InferArgs, NeighborsArgs, TrainArgs, UserError,
};

pub struct Context {
    pub config: RunConfig,
    pub output_dir: PathBuf,
}

fn user(msg: impl Into<String>) -> anyhow::Error {
    UserError(msg.into()).into()
}

fn require_file(path: &Path, what: &str) -> anyhow::Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(user(format!("{what} not found: {}", path.display())))
    }
}

fn require_dir(path: &Path, what: &str) -> anyhow::Result<()> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(user(format!("{what} not found: {}", path.display())))
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn read_text(path: &Path, what: &str) -> anyhow::Result<String> {
    require_file(path, what)?;
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A parsed corpus plus the files it came from, in name order.
struct Corpus {
    bulletins: Vec<Bulletin>,
    files: Vec<PathBuf>,
    hash: String,
}

fn load_corpus(ctx: &Context, args: &CorpusArgs) -> anyhow::Result<Corpus> {
    let parse_dir = args
        .parse_dir
        .clone()
        .or_else(|| ctx.config.parse_dir.clone())
        .ok_or_else(|| user("no parse directory given (--parse-dir or parse_dir in the config)"))?;
    require_dir(&parse_dir, "parse directory")?;
    let corpus_dir = args
        .corpus_dir
        .clone()
        .or_else(|| ctx.config.corpus_dir.clone());
    if let Some(dir) = &corpus_dir {
        require_dir(dir, "corpus directory")?;
    }

    let mut parses: Vec<PathBuf> = fs::read_dir(&parse_dir)
        .with_context(|| format!("listing {}", parse_dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "conllu"))
        .collect();
    parses.sort();

    let mut hasher = Sha256::new();
    let mut bulletins = Vec::with_capacity(parses.len());
    let mut files = Vec::new();
    for path in &parses {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let conllu =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        hash_file(&mut hasher, path, &conllu);
        files.push(path.clone());

        let raw = match &corpus_dir {
            Some(dir) => {
                let txt = dir.join(format!("{stem}.txt"));
                let text = read_text(&txt, "raw text")?;
                hash_file(&mut hasher, &txt, &text);
                files.push(txt);
                Some(text)
            }
            None => None,
        };

        let doc = parse_conllu(&conllu).with_context(|| format!("in {}", path.display()))?;
        let id = doc.bulletin_id.unwrap_or(stem);
        let bulletin = load_bulletin(raw.as_deref(), &conllu, Some(&id), None)
            .with_context(|| format!("in {}", path.display()))?;
        bulletins.push(bulletin);
    }
    info!(
        "loaded {} bulletins from {}",
        bulletins.len(),
        parse_dir.display()
    );
    Ok(Corpus {
        bulletins,
        files,
        hash: hex::encode(hasher.finalize()),
    })
}

fn hash_file(hasher: &mut Sha256, path: &Path, contents: &str) {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    hasher.update((name.len() as u64).to_le_bytes());
    hasher.update(name.as_bytes());
    hasher.update((contents.len() as u64).to_le_bytes());
    hasher.update(contents.as_bytes());
}

/// Written next to each model as `<model>.manifest.json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub variant: Variant,
    pub params: TrainingParams,
    pub min_count: usize,
    pub vocabulary_size: usize,
    /// SHA-256 over the names and contents of the input files.
    pub corpus_sha256: String,
    pub files: Vec<String>,
    pub epoch_losses: Vec<f64>,
}

fn manifest_path(model: &Path) -> PathBuf {
    let mut name = model.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn parse_variant(s: &str) -> anyhow::Result<Variant> {
    s.parse::<Variant>().map_err(|e| user(e.to_string()))
}

pub fn train(ctx: &Context, args: &TrainArgs) -> anyhow::Result<()> {
    let cfg = &ctx.config;
    let variant = match args.variant.as_deref().or(cfg.variant.as_deref()) {
        Some(v) => parse_variant(v)?,
        None => Variant::Sgns,
    };
    let mut params = TrainingParams::defaults_for(variant);
    cfg.training.apply(&mut params);
    macro_rules! flag {
        ($arg:ident => $field:ident) => {
            if let Some(v) = args.$arg {
                params.$field = v;
            }
        };
    }
    flag!(dim => dimensionality);
    flag!(window => window);
    flag!(neg => negative_samples);
    flag!(iter => iterations);
    flag!(lr => learning_rate);
    flag!(subsample => subsample);
    flag!(seed => rng_seed);
    flag!(threads => threads);
    if args.deterministic || cfg.deterministic.unwrap_or(false) {
        params.threads = 1;
    }
    params.validate(variant)?;
    let min_count = args
        .min_count
        .or(cfg.min_count)
        .unwrap_or(DEFAULT_MIN_COUNT);
    let model_path = args
        .model
        .clone()
        .or_else(|| cfg.model.clone())
        .unwrap_or_else(|| ctx.output_dir.join("embeddings.txt"));

    let corpus = load_corpus(ctx, &args.corpus)?;
    let sentences: Vec<Vec<String>> = corpus
        .bulletins
        .iter()
        .flat_map(|b| b.sentences.iter().map(|s| s.lemmas().collect()))
        .collect();
    let vocabulary = build_vocabulary(&corpus.bulletins, min_count)?;
    info!(
        "vocabulary: {} words, {} sentences",
        vocabulary.len(),
        sentences.len()
    );
    let model: EmbeddingModel32 = train_model(&sentences, &vocabulary, &params, variant)?;

    let mut out = create(&model_path)?;
    write_word2vec(&model, &mut out)?;
    out.flush()?;

    let manifest = Manifest {
        variant,
        params,
        min_count,
        vocabulary_size: vocabulary.len(),
        corpus_sha256: corpus.hash,
        files: corpus
            .files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
        epoch_losses: model.epoch_losses().to_vec(),
    };
    let mut out = create(&manifest_path(&model_path))?;
    serde_json::to_writer_pretty(&mut out, &manifest)?;
    writeln!(out)?;
    out.flush()?;
    println!(
        "wrote {} ({} words, d = {})",
        model_path.display(),
        vocabulary.len(),
        model.dim()
    );
    Ok(())
}

fn load_model(path: &Path) -> anyhow::Result<EmbeddingModel32> {
    require_file(path, "model file")?;
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_word2vec(BufReader::new(file)).with_context(|| format!("in {}", path.display()))
}

fn model_arg(ctx: &Context, flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone().or_else(|| ctx.config.model.clone())
}

pub fn neighbors(ctx: &Context, args: &NeighborsArgs) -> anyhow::Result<()> {
    let path = model_arg(ctx, &args.model).ok_or_else(|| user("no model given (--model)"))?;
    let model = load_model(&path)?;
    let word = args.word.to_lowercase();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (w, sim) in nearest(&model, &word, args.k)? {
        writeln!(out, "{w}\t{sim:.6}")?;
    }
    Ok(())
}

/// K from the flag, the config, or the variant recorded in the model
/// manifest, falling back to the negative-sampling default.
fn resolve_k(ctx: &Context, args: &ExtractArgs, model: Option<&Path>) -> usize {
    if let Some(k) = args.k.or(ctx.config.k) {
        return k;
    }
    model
        .and_then(|m| fs::read_to_string(manifest_path(m)).ok())
        .and_then(|text| serde_json::from_str::<Manifest>(&text).ok())
        .map_or(Variant::Sgns.default_k(), |m| m.variant.default_k())
}

pub fn extract(ctx: &Context, args: &ExtractArgs) -> anyhow::Result<()> {
    let cfg = &ctx.config;
    let mut specs = FeatureSpec::defaults();
    if let Some(path) = args.features.clone().or_else(|| cfg.features.clone()) {
        let text = read_text(&path, "feature spec file")?;
        FeatureSpec::apply_overrides(&mut specs, &text)
            .with_context(|| format!("in {}", path.display()))?;
    }
    let lexicon = match args
        .negation_lexicon
        .clone()
        .or_else(|| cfg.negation_lexicon.clone())
    {
        Some(path) => NegationLexicon::parse(&read_text(&path, "negation lexicon")?),
        None => NegationLexicon::default(),
    };
    let model_path = model_arg(ctx, &args.model);
    let k = resolve_k(ctx, args, model_path.as_deref());
    let model = match (&model_path, k) {
        (_, 0) => None,
        (Some(path), _) => Some(load_model(path)?),
        (None, _) => {
            return Err(user(format!(
                "K = {k} needs an embedding model (--model), or pass --K 0"
            )))
        }
    };
    let corpus = load_corpus(ctx, &args.corpus)?;
    if let Some(m) = &model {
        specs = ll::lemmatize_seeds(&specs, m.vocabulary(), &corpus.bulletins);
    }

    let (extractor, warnings) = Extractor::new(&specs, model.as_ref(), k, lexicon)?;
    for w in &warnings {
        eprintln!("warning: {}: {}", w.feature, w.message);
    }
    for set in extractor.indicator_sets() {
        info!("{}: {}", set.feature, set.indicators.join(", "));
    }
    let rows = extractor.extract_all(&corpus.bulletins)?;

    let csv_path = ctx.output_dir.join("linelist.csv");
    let mut out = create(&csv_path)?;
    ll::write_csv(&rows, &mut out)?;
    out.flush()?;
    let mut out = create(&ctx.output_dir.join("linelist.json"))?;
    ll::write_json(&rows, &mut out)?;
    writeln!(out)?;
    out.flush()?;
    println!(
        "extracted {} cases from {} bulletins (K = {k}) into {}",
        rows.len(),
        corpus.bulletins.len(),
        csv_path.display()
    );
    Ok(())
}

/// Reads a line list as JSON when the extension says so, CSV otherwise.
fn read_line_list(path: &Path, what: &str) -> anyhow::Result<Vec<LineListCase>> {
    require_file(path, what)?;
    let file =
        BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
    let cases = if path
        .extension()
        .is_some_and(|x| x.eq_ignore_ascii_case("json"))
    {
        ll::read_json(file)
    } else {
        ll::read_csv(file)
    };
    cases.with_context(|| format!("in {what} {}", path.display()))
}

pub fn evaluate(ctx: &Context, args: &EvaluateArgs) -> anyhow::Result<()> {
    let gold_path = args
        .gold
        .clone()
        .or_else(|| ctx.config.gold.clone())
        .ok_or_else(|| user("no gold line list given (--gold or gold in the config)"))?;
    let auto = read_line_list(&args.auto, "automated line list")?;
    let gold = read_line_list(&gold_path, "gold line list")?;
    let report = evaluate_corpus(&auto, &gold);
    for d in &report.diagnostics {
        warn!("{d}");
    }

    let dir = &ctx.output_dir;
    let mut out = create(&dir.join("metrics.json"))?;
    report.write_json(&mut out)?;
    writeln!(out)?;
    out.flush()?;
    let text = report.to_text();
    let mut out = create(&dir.join("metrics.txt"))?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    let mut out = create(&dir.join("qs_histogram.csv"))?;
    report.write_histogram_csv(&mut out)?;
    out.flush()?;
    print!("{text}");
    Ok(())
}

fn date_feature(name: &str) -> anyhow::Result<Feature> {
    let feature: Feature = name.parse()?;
    if !feature.is_date() {
        return Err(linelist::Error::NotADateFeature(feature.name().to_string()).into());
    }
    Ok(feature)
}

pub fn infer(ctx: &Context, args: &InferArgs) -> anyhow::Result<()> {
    let pairs = match (&args.from, &args.to) {
        (Some(a), Some(b)) => vec![(date_feature(a)?, date_feature(b)?)],
        _ => vec![
            (Feature::OnsetDate, Feature::HospitalizationDate),
            (Feature::HospitalizationDate, Feature::OutcomeDate),
        ],
    };
    let cases = read_line_list(&args.line_list, "line list")?;
    let dir = &ctx.output_dir;

    let (ages, genders) = demographic_distribution(&cases);
    let mut out = create(&dir.join("age_histogram.csv"))?;
    ages.write_csv(&mut out)?;
    out.flush()?;
    let mut out = create(&dir.join("gender_counts.csv"))?;
    genders.write_csv(&mut out)?;
    out.flush()?;

    for (from, to) in pairs {
        let hist = interval_distribution(&cases, from, to)?;
        let name = interval_file_name(from, to);
        let mut out = create(&dir.join(&name))?;
        hist.write_csv(&mut out)?;
        out.flush()?;
        println!(
            "{name}: {} intervals, {} incomplete",
            hist.total() - hist.null_count,
            hist.null_count
        );
    }
    println!(
        "{} cases: {} with age, {} male, {} female",
        cases.len(),
        ages.total() - ages.null_count,
        genders.male,
        genders.female
    );
    Ok(())
}

fn interval_file_name(from: Feature, to: Feature) -> String {
    let short = |f: Feature| f.name().trim_end_matches("_date").to_string();
    format!("{}_to_{}.csv", short(from), short(to))
}
