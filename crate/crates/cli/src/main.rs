//! `linelist`: train embeddings, extract line lists, score them against gold
//! annotations and summarize them.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::RunConfig;

/// A mistake in the invocation or the inputs (exit status 2).
#[derive(Debug)]
pub struct UserError(pub String);

impl fmt::Display for UserError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UserError {}

#[derive(Parser, Debug)]
#[command(
    name = "linelist",
    version,
    about = "Line-list extraction from parsed outbreak bulletins"
)]
struct Cli {
    /// TOML run configuration; flags override its keys.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory for command outputs [default: out].
    #[arg(long, global = true, env = "LINELIST_OUTPUT_DIR", value_name = "DIR")]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train skip-gram embeddings on the lemmas of a parsed corpus.
    #[command(name = "train-embeddings", alias = "train")]
    Train(TrainArgs),
    /// Print the nearest words to WORD in a trained model.
    Neighbors(NeighborsArgs),
    /// Extract a line list from every bulletin in a parse directory.
    Extract(ExtractArgs),
    /// Score an automated line list against a gold line list.
    Evaluate(EvaluateArgs),
    /// Age, gender and interval histograms of a line list.
    Infer(InferArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CorpusArgs {
    /// Directory of `*.conllu` parses, one bulletin per file.
    #[arg(long, value_name = "DIR")]
    pub parse_dir: Option<PathBuf>,
    /// Directory of raw `<stem>.txt` texts (one sentence per line) matching
    /// the parse files.
    #[arg(long, value_name = "DIR")]
    pub corpus_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// sgns (negative sampling) or sghs (hierarchical softmax).
    #[arg(long)]
    pub variant: Option<String>,
    /// Vector dimensionality.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Context radius.
    #[arg(long)]
    pub window: Option<usize>,
    /// Negative samples per pair (sgns only).
    #[arg(long)]
    pub neg: Option<usize>,
    /// Passes over the corpus.
    #[arg(long)]
    pub iter: Option<usize>,
    /// Initial learning rate.
    #[arg(long)]
    pub lr: Option<f64>,
    /// Drop words seen fewer times than this [default: 5].
    #[arg(long)]
    pub min_count: Option<usize>,
    /// Subsampling threshold for frequent words; 0 disables it.
    #[arg(long)]
    pub subsample: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Single-threaded, bit-reproducible training.
    #[arg(long)]
    pub deterministic: bool,
    /// Output model file [default: <output-dir>/embeddings.txt].
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct NeighborsArgs {
    pub word: String,
    /// word2vec text model.
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Number of neighbors to print.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// word2vec text model used to grow seeds.
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Neighbors added per seed; 0 uses the seeds alone [default: from the
    /// model manifest, else 5].
    #[arg(long, short = 'K', visible_alias = "K")]
    pub k: Option<usize>,
    /// `feature=seed` lines overriding the default seeds.
    #[arg(long, value_name = "FILE")]
    pub features: Option<PathBuf>,
    /// Negation cues, one per line, replacing the built-in list.
    #[arg(long, value_name = "FILE")]
    pub negation_lexicon: Option<PathBuf>,
    /// Accepted for symmetry with training; extraction is always reproducible.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args, Debug, Clone)]
pub struct EvaluateArgs {
    /// Automated line list (CSV or JSON).
    #[arg(long, value_name = "FILE")]
    pub auto: PathBuf,
    /// Gold line list (CSV or JSON).
    #[arg(long, value_name = "FILE")]
    pub gold: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InferArgs {
    /// Line list (CSV or JSON).
    #[arg(long, value_name = "FILE")]
    pub line_list: PathBuf,
    /// Start date feature of a single interval histogram.
    #[arg(long, requires = "to")]
    pub from: Option<String>,
    /// End date feature of a single interval histogram.
    #[arg(long, requires = "from")]
    pub to: Option<String>,
}

/// Exit status for an error chain: 2 for user and input errors, 1 otherwise.
fn exit_status(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UserError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<linelist::Error>() {
            return match e {
                linelist::Error::Io(_) => 1,
                linelist::Error::Csv(c) if matches!(c.kind(), csv::ErrorKind::Io(_)) => 1,
                _ => 2,
            };
        }
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let output_dir = cli
        .output_dir
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let ctx = commands::Context { config, output_dir };
    match cli.command {
        Command::Train(args) => commands::train(&ctx, &args),
        Command::Neighbors(args) => commands::neighbors(&ctx, &args),
        Command::Extract(args) => commands::extract(&ctx, &args),
        Command::Evaluate(args) => commands::evaluate(&ctx, &args),
        Command::Infer(args) => commands::infer(&ctx, &args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}
