use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmsent::corpus::{corpus_stats, load_corpus, LabelMode};
use cmsent::eval::{default_grid, grid_tune, kfold_cv};
use cmsent::lexicon::LexiconOptions;
use cmsent::{
    Augmenter, EvalReport, Label, LabeledTweet, Lang, NbModel, Params, Pipeline,
    SentimentLexicon,
};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<cmsent::Error> for CliError {
    fn from(e: cmsent::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "cmsent", version, about = "Sentiment classification for language-tagged code-mixed tweets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a model on a labeled corpus.
    Train(Opts),
    /// Label every tweet of a corpus with a trained model.
    Predict(Opts),
    /// Score a predictions file against a labeled corpus.
    Eval(Opts),
    /// Stratified k-fold cross validation on a labeled corpus.
    Cv(Opts),
    /// Grid search over ngram_max {1,2} x min_count {1,2,3} by CV macro-F.
    Tune(Opts),
    /// Print corpus statistics.
    Stats(Opts),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Pair {
    #[value(name = "BN-EN")]
    BnEn,
    #[value(name = "HI-EN")]
    HiEn,
}

#[derive(Debug, Args)]
struct Opts {
    /// Largest n-gram order.
    #[arg(long, default_value_t = 2)]
    ngram_max: usize,
    /// Minimum total corpus occurrences for an n-gram to enter the vocabulary
    /// [default: 2, or the --pair preset].
    #[arg(long)]
    min_count: Option<usize>,
    /// Score by likelihood only.
    #[arg(long)]
    no_priors: bool,
    /// Directory with positive.txt and negative.txt English word lists.
    #[arg(long, value_name = "PATH")]
    lexicon_en: Option<PathBuf>,
    /// Directory with positive.txt and negative.txt romanized Bengali word lists.
    #[arg(long, value_name = "PATH")]
    lexicon_bn: Option<PathBuf>,
    /// Match lexicon entries exactly instead of lowercasing.
    #[arg(long)]
    case_sensitive: bool,
    /// Language-pair preset: BN-EN sets min_count 2, HI-EN sets min_count 1.
    #[arg(long, value_enum)]
    pair: Option<Pair>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of cross-validation folds.
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Predictions file (`id<TAB>label`) for `eval`.
    #[arg(long, value_name = "PATH")]
    predictions: Option<PathBuf>,
}

impl Opts {
    fn params(&self) -> Result<Params> {
        let preset = match self.pair {
            Some(Pair::HiEn) => 1,
            Some(Pair::BnEn) | None => 2,
        };
        let params = Params {
            ngram_max: self.ngram_max,
            min_count: self.min_count.unwrap_or(preset),
            use_priors: !self.no_priors,
        };
        if params.ngram_max < 1 {
            return Err(CliError::Usage("--ngram-max must be at least 1".into()));
        }
        if params.min_count < 1 {
            return Err(CliError::Usage("--min-count must be at least 1".into()));
        }
        Ok(params)
    }

    fn folds(&self) -> Result<usize> {
        if self.folds < 2 {
            return Err(CliError::Usage("--folds must be at least 2".into()));
        }
        Ok(self.folds)
    }

    fn input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Usage("--input is required".into()))
    }

    fn model(&self) -> Result<&Path> {
        self.model
            .as_deref()
            .ok_or_else(|| CliError::Usage("--model is required".into()))
    }

    fn pipeline(&self) -> Result<Pipeline> {
        let options = LexiconOptions {
            case_fold: !self.case_sensitive,
        };
        let load = |dir: &Option<PathBuf>, lang: Lang| -> Result<SentimentLexicon> {
            let Some(dir) = dir else {
                return Ok(SentimentLexicon::empty(lang));
            };
            let pos = read_bytes(&dir.join("positive.txt"))?;
            let neg = read_bytes(&dir.join("negative.txt"))?;
            SentimentLexicon::load_with(&pos, &neg, lang, options)
                .map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))
        };
        let en = load(&self.lexicon_en, Lang::En)?;
        let bn = load(&self.lexicon_bn, Lang::Bn)?;
        Ok(Pipeline::new(Augmenter::new(en, bn)))
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_bytes(path)?)
        .map_err(|_| CliError::Data(format!("{}: not valid UTF-8", path.display())))
}

fn read_corpus(path: &Path, mode: LabelMode) -> Result<Vec<LabeledTweet>> {
    load_corpus(&read_text(path)?, mode)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Internal(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("stdout: {e}"))),
    }
}

fn train(opts: &Opts) -> Result<()> {
    let params = opts.params()?;
    let model_path = opts.model()?;
    let corpus = read_corpus(opts.input()?, LabelMode::Labeled)?;
    println!("{}", corpus_stats(&corpus));
    let model = opts.pipeline()?.fit(&corpus, params)?;
    println!("vocabulary\t{}", model.vocab().len());
    fs::write(model_path, model.save())
        .map_err(|e| CliError::Internal(format!("{}: {e}", model_path.display())))?;
    println!("model\t{}", model_path.display());
    Ok(())
}

fn predict(opts: &Opts) -> Result<()> {
    let path = opts.model()?;
    let mut model = NbModel::load(&read_text(path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if opts.no_priors {
        model.set_use_priors(false);
    }
    let corpus = read_corpus(opts.input()?, LabelMode::Either)?;
    let pipeline = opts.pipeline()?;
    let mut out = String::new();
    for tweet in &corpus {
        let label = pipeline.predict(&model, tweet)?;
        out.push_str(&format!("{}\t{}\n", tweet.id, label));
    }
    write_output(opts.output.as_deref(), &out)
}

fn read_predictions(path: &Path) -> Result<HashMap<String, Label>> {
    let text = read_text(path)?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Data(format!("{}:{}: {msg}", path.display(), i + 1));
        let (id, label) = line
            .split_once('\t')
            .ok_or_else(|| bad("expected id<TAB>label".into()))?;
        let label = label
            .trim()
            .parse::<Label>()
            .map_err(|_| bad(format!("unknown label {label:?}")))?;
        if out.insert(id.trim().to_string(), label).is_some() {
            return Err(bad(format!("duplicate id {id:?}")));
        }
    }
    Ok(out)
}

fn eval(opts: &Opts) -> Result<()> {
    let gold = read_corpus(opts.input()?, LabelMode::Labeled)?;
    let pred_path = opts
        .predictions
        .as_deref()
        .ok_or_else(|| CliError::Usage("--predictions is required".into()))?;
    let predictions = read_predictions(pred_path)?;

    let missing: Vec<&str> = gold
        .iter()
        .filter(|t| !predictions.contains_key(&t.id))
        .map(|t| t.id.as_str())
        .collect();
    let gold_ids: HashSet<&str> = gold.iter().map(|t| t.id.as_str()).collect();
    let mut extra: Vec<&str> = predictions
        .keys()
        .map(String::as_str)
        .filter(|id| !gold_ids.contains(id))
        .collect();
    extra.sort_unstable();
    if !missing.is_empty() || !extra.is_empty() {
        let mut msg = String::from("predictions do not align with the gold corpus");
        if !missing.is_empty() {
            msg.push_str(&format!("\n  missing predictions for: {}", missing.join(", ")));
        }
        if !extra.is_empty() {
            msg.push_str(&format!("\n  predictions for unknown ids: {}", extra.join(", ")));
        }
        return Err(CliError::Data(msg));
    }

    let g: Vec<Label> = gold.iter().map(|t| t.label.unwrap()).collect();
    let p: Vec<Label> = gold.iter().map(|t| predictions[&t.id]).collect();
    let report = EvalReport::evaluate(&g, &p).map_err(|e| CliError::Data(e.to_string()))?;
    emit_report(opts, &report.to_table(), &report.to_kv())
}

/// Human-readable table on stdout; key-value lines to --output, or after the
/// table when no output file is given.
fn emit_report(opts: &Opts, table: &str, kv: &str) -> Result<()> {
    print!("{table}");
    match opts.output.as_deref() {
        Some(path) => write_output(Some(path), kv),
        None => {
            println!();
            write_output(None, kv)
        }
    }
}

fn cv(opts: &Opts) -> Result<()> {
    let params = opts.params()?;
    let k = opts.folds()?;
    let corpus = read_corpus(opts.input()?, LabelMode::Labeled)?;
    let result = kfold_cv(&opts.pipeline()?, &corpus, k, opts.seed, params)?;
    let mut table = String::new();
    table.push_str(&format!(
        "{}-fold cross validation, seed {}, ngram_max {}, min_count {}, priors {}\n",
        result.k, result.seed, params.ngram_max, params.min_count, params.use_priors
    ));
    for (i, fold) in result.folds.iter().enumerate() {
        table.push_str(&format!(
            "fold {i:>2}: n={:<5} vocab={:<7} macro-F={:.4}\n",
            fold.report.total,
            fold.vocabulary.len(),
            fold.report.macro_f
        ));
    }
    table.push_str("\nmean over folds\n");
    table.push_str(&result.mean.to_table());
    emit_report(opts, &table, &result.to_kv())
}

fn tune(opts: &Opts) -> Result<()> {
    let params = opts.params()?;
    let k = opts.folds()?;
    let corpus = read_corpus(opts.input()?, LabelMode::Labeled)?;
    let grid = default_grid(params.use_priors);
    let result = grid_tune(&opts.pipeline()?, &corpus, &grid, k, opts.seed)?;
    let mut table = String::from("ngram_max min_count macro-F\n");
    for cell in &result.cells {
        let score = cell
            .macro_f
            .map_or("(empty vocabulary)".to_string(), |f| format!("{f:.4}"));
        table.push_str(&format!(
            "{:>9} {:>9} {score}\n",
            cell.params.ngram_max, cell.params.min_count
        ));
    }
    table.push_str(&format!(
        "selected: ngram_max {} min_count {} (macro-F {:.4})\n",
        result.best.ngram_max, result.best.min_count, result.best_macro_f
    ));
    emit_report(opts, &table, &result.to_kv())
}

fn stats(opts: &Opts) -> Result<()> {
    let corpus = read_corpus(opts.input()?, LabelMode::Either)?;
    write_output(opts.output.as_deref(), &format!("{}\n", corpus_stats(&corpus)))
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Train(o) => train(o),
        Command::Predict(o) => predict(o),
        Command::Eval(o) => eval(o),
        Command::Cv(o) => cv(o),
        Command::Tune(o) => tune(o),
        Command::Stats(o) => stats(o),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(3),
    }
}
