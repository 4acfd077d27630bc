//! Command-line front end: reproducible runs driven by flags and an
//! optional flat config file.
//!
//! Precedence for every setting: command-line flag, then config-file entry,
//! then the `TERMFORGE_STOPWORDS` environment variable (stopwords only),
//! then the built-in default. Commands that write result files also write a
//! `run.json` echoing the fully resolved configuration; re-running any
//! command with the same resolved configuration reproduces every output
//! byte for byte.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    best_beta_for_f1, beta_sweep, build_query_lineup, compare_schemes, rank_terms, BetaGrid,
};
use crate::corpus::{
    build_vocabulary, load_corpus, split_corpus, write_canonical_jsonl, CorpusFormat, LabelMode,
    LabeledCorpus, Normalizer, Split, SplitConfig, VocabConfig,
};
use crate::error::{Error, Result};
use crate::query::{evaluate, parse_query};
use crate::report;
use crate::stats::{build_index, InvertedIndex};
use crate::weighting::{SchemeId, DEFAULT_LAMBDA};

/// The resolved settings for one run, echoed verbatim into `run.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub corpus_path: PathBuf,
    pub corpus_format: String,
    pub min_df: u32,
    pub max_ngram: usize,
    pub stopword_path: Option<PathBuf>,
    pub train_frac: f64,
    pub seed: u64,
    pub stratified: bool,
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub beta_step: f64,
    pub lambda: f64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus_path: PathBuf::new(),
            corpus_format: "jsonl".to_string(),
            min_df: 15,
            max_ngram: 3,
            stopword_path: None,
            train_frac: 0.8,
            seed: 42,
            stratified: true,
            beta_lo: 0.0,
            beta_hi: 10.0,
            beta_step: 0.01,
            lambda: DEFAULT_LAMBDA,
            output_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "termforge",
    version,
    about = "Supervised term weighting and topic-query retrieval over labeled corpora"
)]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

/// Global flags; each one overrides the matching config-file key.
#[derive(Debug, Args)]
pub struct Overrides {
    /// Flat key=value config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Corpus file or directory (config key corpus_path).
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Corpus format: jsonl, ng20, reuters, or erntg (config key corpus_format).
    #[arg(long, global = true, value_name = "NAME")]
    pub format: Option<String>,
    /// Directory for result files and run.json.
    #[arg(long, global = true, value_name = "PATH")]
    pub output_dir: Option<PathBuf>,
    /// Seed for the train/test split.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Minimum training document frequency for vocabulary terms.
    #[arg(long, global = true, value_name = "N")]
    pub min_df: Option<u32>,
    /// Longest n-gram to extract (1..=3).
    #[arg(long, global = true, value_name = "N")]
    pub max_ngram: Option<usize>,
    /// Fraction of documents assigned to the training split.
    #[arg(long, global = true, value_name = "F")]
    pub train_frac: Option<f64>,
    /// Stratify the split by class (single-label corpora only).
    #[arg(long, global = true, value_name = "BOOL")]
    pub stratified: Option<bool>,
    /// Stopword file: one word per line, # comments.
    #[arg(long, global = true, value_name = "PATH")]
    pub stopwords: Option<PathBuf>,
    /// Lower end of the beta sweep grid.
    #[arg(long, global = true, value_name = "F")]
    pub beta_lo: Option<f64>,
    /// Upper end (exclusive) of the beta sweep grid.
    #[arg(long, global = true, value_name = "F")]
    pub beta_hi: Option<f64>,
    /// Step of the beta sweep grid.
    #[arg(long, global = true, value_name = "F")]
    pub beta_step: Option<f64>,
    /// Mixing weight for the IGM composite schemes.
    #[arg(long, global = true, value_name = "F")]
    pub lambda: Option<f64>,
    /// Suppress per-stage log lines on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a corpus to canonical JSONL plus a sidecar manifest.
    Ingest {
        /// Path for the canonical JSONL; the manifest lands next to it.
        #[arg(long, value_name = "PATH")]
        output: PathBuf,
    },
    /// Print the vocabulary with training document frequencies as CSV.
    Vocab,
    /// Print the top terms for a class under one scheme as CSV.
    Rank {
        /// Scheme name (see --help for the list).
        #[arg(long, value_name = "NAME")]
        scheme: String,
        /// FDD's beta; required for fdd, rejected elsewhere.
        #[arg(long, value_name = "F")]
        beta: Option<f64>,
        /// Class to rank terms for.
        #[arg(long, value_name = "CLASS")]
        class: String,
        /// How many terms to print.
        #[arg(long, value_name = "N", default_value_t = 20)]
        top: usize,
    },
    /// Sweep beta over the grid and report the FDD-top term per run.
    Sweep {
        #[arg(long, value_name = "CLASS")]
        class: String,
    },
    /// Evaluate one disjunctive query against a class.
    Eval {
        /// Query as pipe-separated n-grams, e.g. "royal bank|economist".
        #[arg(long, value_name = "QUERY")]
        query: String,
        #[arg(long, value_name = "CLASS")]
        class: String,
        /// Split to evaluate on: train or test.
        #[arg(long, value_name = "SPLIT", default_value = "test")]
        split: String,
    },
    /// Compare schemes by their top term's retrieval quality per class.
    Compare {
        /// "all" or a comma-separated list of scheme names; fdd entries
        /// carry beta as "fdd:0.5".
        #[arg(long, value_name = "LIST", default_value = "all")]
        schemes: String,
        /// "all" (every class evaluable on the split) or a comma-separated
        /// list.
        #[arg(long, value_name = "LIST", default_value = "all")]
        classes: String,
        /// Split to evaluate on: train or test.
        #[arg(long, value_name = "SPLIT", default_value = "test")]
        split: String,
    },
    /// Evaluate the seven standard FDD/DISCR/DESCR queries for a class.
    Lineup {
        #[arg(long, value_name = "CLASS")]
        class: String,
    },
}

/// Maps an error to the process exit code: 2 for usage errors (bad
/// arguments, unknown names, missing paths), 1 for data errors (malformed
/// or degenerate input).
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. }
        | Error::UnknownClass(_)
        | Error::UnknownTerm(_)
        | Error::QuerySyntax { .. }
        | Error::InvalidArgument(_) => 2,
        Error::Malformed { .. }
        | Error::DuplicateDocId(_)
        | Error::DegenerateClass { .. }
        | Error::EmptyTrainingSplit
        | Error::EmptyVocabulary => 1,
    }
}

/// Parses `termforge` arguments from the process environment and runs them.
pub fn run() -> Result<()> {
    let cli = Cli::parse();
    execute(cli)
}

/// Runs an already-parsed invocation (test entry point).
pub fn execute(cli: Cli) -> Result<()> {
    let quiet = cli.overrides.quiet;
    let cfg = resolve_config(&cli.overrides)?;
    match cli.command {
        Command::Ingest { output } => cmd_ingest(&cfg, &output, quiet),
        Command::Vocab => cmd_vocab(&cfg, quiet),
        Command::Rank { scheme, beta, class, top } => {
            cmd_rank(&cfg, &cli.overrides, &scheme, beta, &class, top, quiet)
        }
        Command::Sweep { class } => cmd_sweep(&cfg, &class, quiet),
        Command::Eval { query, class, split } => cmd_eval(&cfg, &query, &class, &split, quiet),
        Command::Compare { schemes, classes, split } => {
            cmd_compare(&cfg, &schemes, &classes, &split, quiet)
        }
        Command::Lineup { class } => cmd_lineup(&cfg, &class, quiet),
    }
}

fn log(quiet: bool, msg: impl Display) {
    if !quiet {
        eprintln!("{msg}");
    }
}

/// Defaults <- config file <- TERMFORGE_STOPWORDS <- flags.
fn resolve_config(ov: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &ov.config {
        apply_config_file(&mut cfg, path)?;
    }
    if cfg.stopword_path.is_none() {
        if let Ok(path) = std::env::var("TERMFORGE_STOPWORDS") {
            if !path.is_empty() {
                cfg.stopword_path = Some(PathBuf::from(path));
            }
        }
    }
    if let Some(v) = &ov.input {
        cfg.corpus_path = v.clone();
    }
    if let Some(v) = &ov.format {
        cfg.corpus_format = v.clone();
    }
    if let Some(v) = &ov.output_dir {
        cfg.output_dir = v.clone();
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if let Some(v) = ov.min_df {
        cfg.min_df = v;
    }
    if let Some(v) = ov.max_ngram {
        cfg.max_ngram = v;
    }
    if let Some(v) = ov.train_frac {
        cfg.train_frac = v;
    }
    if let Some(v) = ov.stratified {
        cfg.stratified = v;
    }
    if let Some(v) = &ov.stopwords {
        cfg.stopword_path = Some(v.clone());
    }
    if let Some(v) = ov.beta_lo {
        cfg.beta_lo = v;
    }
    if let Some(v) = ov.beta_hi {
        cfg.beta_hi = v;
    }
    if let Some(v) = ov.beta_step {
        cfg.beta_step = v;
    }
    if let Some(v) = ov.lambda {
        cfg.lambda = v;
    }
    Ok(cfg)
}

/// Applies a flat key=value file; keys are RunConfig field names. Unknown
/// keys and unparsable values are usage errors naming the offender.
fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::invalid(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "corpus_path" => cfg.corpus_path = PathBuf::from(value),
            "corpus_format" => cfg.corpus_format = value.to_string(),
            "min_df" => cfg.min_df = parse_value(key, value)?,
            "max_ngram" => cfg.max_ngram = parse_value(key, value)?,
            "stopword_path" => cfg.stopword_path = Some(PathBuf::from(value)),
            "train_frac" => cfg.train_frac = parse_value(key, value)?,
            "seed" => cfg.seed = parse_value(key, value)?,
            "stratified" => cfg.stratified = parse_value(key, value)?,
            "beta_lo" => cfg.beta_lo = parse_value(key, value)?,
            "beta_hi" => cfg.beta_hi = parse_value(key, value)?,
            "beta_step" => cfg.beta_step = parse_value(key, value)?,
            "lambda" => cfg.lambda = parse_value(key, value)?,
            "output_dir" => cfg.output_dir = PathBuf::from(value),
            other => {
                return Err(Error::invalid(format!(
                    "{}:{}: unknown config key {other:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: Display,
{
    value.parse().map_err(|e| Error::invalid(format!("config key {key}: {e}")))
}

fn corpus_format(cfg: &RunConfig) -> Result<CorpusFormat> {
    cfg.corpus_format.parse()
}

fn normalizer_for(cfg: &RunConfig) -> Result<Normalizer> {
    match &cfg.stopword_path {
        Some(path) => Normalizer::from_file(path),
        None => Ok(Normalizer::default()),
    }
}

fn require_input(cfg: &RunConfig) -> Result<()> {
    if cfg.corpus_path.as_os_str().is_empty() {
        return Err(Error::invalid("no corpus given: pass --input or set corpus_path"));
    }
    Ok(())
}

/// Loads and splits the corpus; vocabulary is left for `prepare_indexed`.
fn load_and_split(cfg: &RunConfig, quiet: bool) -> Result<(LabeledCorpus, Normalizer)> {
    require_input(cfg)?;
    let normalizer = normalizer_for(cfg)?;
    let corpus = load_corpus(&cfg.corpus_path, corpus_format(cfg)?, &normalizer)?;
    log(
        quiet,
        format!(
            "loaded {} documents, {} classes ({:?})",
            corpus.len(),
            corpus.classes.len(),
            corpus.label_mode
        ),
    );
    let split_cfg = SplitConfig { train_frac: cfg.train_frac, seed: cfg.seed, stratified: cfg.stratified };
    let corpus = split_corpus(corpus, &split_cfg)?;
    log(
        quiet,
        format!(
            "split: {} train / {} test (seed {})",
            corpus.doc_indices(Split::Train).len(),
            corpus.doc_indices(Split::Test).len(),
            cfg.seed
        ),
    );
    Ok((corpus, normalizer))
}

/// Loads, splits, builds the vocabulary, and indexes the training split.
fn prepare_indexed(cfg: &RunConfig, quiet: bool) -> Result<(LabeledCorpus, InvertedIndex, Normalizer)> {
    let (mut corpus, normalizer) = load_and_split(cfg, quiet)?;
    let vocab_cfg = VocabConfig { min_df: cfg.min_df, max_ngram: cfg.max_ngram };
    corpus.vocabulary = build_vocabulary(&corpus, &vocab_cfg)?;
    log(quiet, format!("vocabulary: {} n-grams (min_df {})", corpus.vocabulary.len(), cfg.min_df));
    let index = build_index(&corpus)?;
    Ok((corpus, index, normalizer))
}

fn write_file(path: &Path, bytes: &[u8], quiet: bool) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    log(quiet, format!("wrote {}", path.display()));
    Ok(())
}

fn write_run_json(cfg: &RunConfig, quiet: bool) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(cfg).map_err(|e| Error::invalid(e.to_string()))?;
    bytes.push(b'\n');
    write_file(&cfg.output_dir.join("run.json"), &bytes, quiet)
}

fn print_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes).and_then(|()| out.flush()).map_err(|e| Error::io("<stdout>", e))
}

#[derive(Serialize)]
struct Manifest<'a> {
    documents: usize,
    label_mode: LabelMode,
    classes: BTreeMap<String, u32>,
    split_sizes: BTreeMap<&'static str, usize>,
    split_assignment: BTreeMap<&'a str, &'static str>,
    config: &'a RunConfig,
}

fn cmd_ingest(cfg: &RunConfig, output: &Path, quiet: bool) -> Result<()> {
    let (corpus, _) = load_and_split(cfg, quiet)?;
    let mut jsonl = Vec::new();
    write_canonical_jsonl(&corpus, &mut jsonl).map_err(|e| Error::io(output, e))?;
    write_file(output, &jsonl, quiet)?;

    let manifest = Manifest {
        documents: corpus.len(),
        label_mode: corpus.label_mode,
        classes: corpus.class_histogram(),
        split_sizes: BTreeMap::from([
            ("train", corpus.doc_indices(Split::Train).len()),
            ("test", corpus.doc_indices(Split::Test).len()),
        ]),
        split_assignment: corpus
            .documents
            .iter()
            .zip(&corpus.split)
            .map(|(d, s)| (d.id.as_str(), s.as_str()))
            .collect(),
        config: cfg,
    };
    let mut bytes =
        serde_json::to_vec_pretty(&manifest).map_err(|e| Error::invalid(e.to_string()))?;
    bytes.push(b'\n');
    let manifest_path = sidecar_manifest_path(output);
    write_file(&manifest_path, &bytes, quiet)
}

/// `corpus.jsonl` -> `corpus.jsonl.manifest.json`.
fn sidecar_manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn cmd_vocab(cfg: &RunConfig, quiet: bool) -> Result<()> {
    let (_corpus, index, _) = prepare_indexed(cfg, quiet)?;
    let mut buf = Vec::new();
    report::write_vocab_csv(&mut buf, &index)?;
    print_stdout(&buf)
}

fn cmd_rank(
    cfg: &RunConfig,
    ov: &Overrides,
    scheme: &str,
    beta: Option<f64>,
    class: &str,
    top: usize,
    quiet: bool,
) -> Result<()> {
    let wants_lambda =
        matches!(scheme, "tgf-star-igm" | "tgf-star-igm-imp" | "sqrt-tgf-star-igm-imp");
    if ov.lambda.is_some() && !wants_lambda {
        return Err(Error::invalid(format!("--lambda only applies to the IGM schemes, not {scheme}")));
    }
    let scheme = SchemeId::parse(scheme, beta, wants_lambda.then_some(cfg.lambda))?;
    let (_corpus, index, _) = prepare_indexed(cfg, quiet)?;
    let ranked = rank_terms(&index, &scheme, class, top)?;
    let mut buf = Vec::new();
    report::write_rank_csv(&mut buf, &ranked)?;
    print_stdout(&buf)
}

fn cmd_sweep(cfg: &RunConfig, class: &str, quiet: bool) -> Result<()> {
    let grid = BetaGrid::new(cfg.beta_lo, cfg.beta_hi, cfg.beta_step)?;
    let (corpus, index, _) = prepare_indexed(cfg, quiet)?;
    let sweep = beta_sweep(&corpus, &index, class, grid)?;
    log(quiet, format!("sweep: {} runs over [{}, {})", sweep.entries.len(), grid.lo, grid.hi));
    if let Ok(best) = best_beta_for_f1(&sweep) {
        log(
            quiet,
            format!(
                "best train F1 {:.6} at beta in [{:.6}, {:.6}) with term {:?}",
                best.train.f1,
                best.beta_lo,
                best.beta_hi,
                best.term.as_str()
            ),
        );
    }
    let mut buf = Vec::new();
    report::write_sweep_csv(&mut buf, &sweep)?;
    write_file(&cfg.output_dir.join("sweep.csv"), &buf, quiet)?;
    write_run_json(cfg, quiet)
}

fn cmd_eval(cfg: &RunConfig, query: &str, class: &str, split: &str, quiet: bool) -> Result<()> {
    let split: Split = split.parse()?;
    let (corpus, normalizer) = load_and_split(cfg, quiet)?;
    let parsed = parse_query(query, &normalizer)?;
    let metrics = evaluate(&corpus, &parsed, class, split)?;
    log(
        quiet,
        format!(
            "query {:?} on {}: P {:.6} R {:.6} F1 {:.6}",
            parsed.display(),
            split.as_str(),
            metrics.precision,
            metrics.recall,
            metrics.f1
        ),
    );
    let mut buf = Vec::new();
    report::write_eval_csv(&mut buf, class, &parsed.display(), split, &metrics)?;
    write_file(&cfg.output_dir.join("eval.csv"), &buf, quiet)?;
    write_run_json(cfg, quiet)
}

/// "all" or a comma-separated list; fdd entries carry beta as "fdd:0.5".
fn parse_scheme_list(spec: &str, lambda: f64) -> Result<Vec<SchemeId>> {
    if spec == "all" {
        let mut schemes = SchemeId::comparison_set(lambda);
        for beta in [0.5, 1.0, 10.0] {
            schemes.push(SchemeId::Fdd { beta });
        }
        return Ok(schemes);
    }
    let mut schemes = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::invalid(format!("empty scheme entry in {spec:?}")));
        }
        let (name, param) = match item.split_once(':') {
            Some((name, param)) => {
                let beta: f64 = param.parse().map_err(|_| {
                    Error::invalid(format!("bad parameter in scheme entry {item:?}"))
                })?;
                (name, Some(beta))
            }
            None => (item, None),
        };
        let scheme = SchemeId::parse(name, param, None)?;
        // The list syntax has no per-entry lambda; the global one applies.
        let scheme = match scheme {
            SchemeId::TgfStarIgm { .. } => SchemeId::TgfStarIgm { lambda },
            SchemeId::TgfStarIgmImp { .. } => SchemeId::TgfStarIgmImp { lambda },
            SchemeId::SqrtTgfStarIgmImp { .. } => SchemeId::SqrtTgfStarIgmImp { lambda },
            s => s,
        };
        schemes.push(scheme);
    }
    Ok(schemes)
}

/// "all" resolves to the classes with at least one training document and at
/// least one document on the evaluation split; explicit names must exist.
fn resolve_classes(
    corpus: &LabeledCorpus,
    index: &InvertedIndex,
    spec: &str,
    split: Split,
    quiet: bool,
) -> Result<Vec<String>> {
    let on_split: std::collections::HashSet<&str> = corpus
        .doc_indices(split)
        .into_iter()
        .flat_map(|i| corpus.documents[i].labels.iter().map(String::as_str))
        .collect();
    if spec == "all" {
        let mut classes = Vec::new();
        for class in index.classes() {
            let trained = index.class_size(class).unwrap_or(0) > 0;
            if trained && on_split.contains(class.as_str()) {
                classes.push(class.clone());
            } else {
                log(
                    quiet,
                    format!(
                        "skipping class {class:?}: no documents on the {} split",
                        if trained { split.as_str() } else { "train" }
                    ),
                );
            }
        }
        if classes.is_empty() {
            return Err(Error::invalid("no class is evaluable on the requested split"));
        }
        return Ok(classes);
    }
    let mut classes = Vec::new();
    for name in spec.split(',') {
        let name = name.trim();
        if index.class_size(name).is_none() {
            return Err(Error::UnknownClass(name.to_string()));
        }
        classes.push(name.to_string());
    }
    Ok(classes)
}

fn cmd_compare(cfg: &RunConfig, schemes: &str, classes: &str, split: &str, quiet: bool) -> Result<()> {
    let split: Split = split.parse()?;
    let schemes = parse_scheme_list(schemes, cfg.lambda)?;
    let (corpus, index, _) = prepare_indexed(cfg, quiet)?;
    let classes = resolve_classes(&corpus, &index, classes, split, quiet)?;
    log(
        quiet,
        format!("comparing {} schemes over {} classes on {}", schemes.len(), classes.len(), split.as_str()),
    );
    let report_data = compare_schemes(&corpus, &index, &schemes, &classes, split)?;
    let mut buf = Vec::new();
    report::write_comparison_csv(&mut buf, &report_data)?;
    write_file(&cfg.output_dir.join("comparison.csv"), &buf, quiet)?;
    write_run_json(cfg, quiet)
}

fn cmd_lineup(cfg: &RunConfig, class: &str, quiet: bool) -> Result<()> {
    let (corpus, index, _) = prepare_indexed(cfg, quiet)?;
    let lineup = build_query_lineup(&corpus, &index, class)?;
    let mut buf = Vec::new();
    report::write_lineup_csv(&mut buf, class, &lineup)?;
    write_file(&cfg.output_dir.join("lineup.csv"), &buf, quiet)?;
    write_run_json(cfg, quiet)
}
