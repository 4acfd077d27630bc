//! Labeled corpora: documents, normalization, n-gram vocabularies, and
//! deterministic train/test splits.

mod loaders;
mod normalize;

pub use loaders::{load_corpus, write_canonical_jsonl, CorpusFormat};
pub use normalize::Normalizer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

pub type ClassId = String;

/// Train/test membership of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::invalid(format!("unknown split {other:?} (expected train or test)"))),
        }
    }
}

/// Whether every document carries exactly one label or any number of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    SingleLabel,
    MultiLabel,
}

/// One document: raw text plus its normalized token stream and labels.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub text: String,
    /// `normalize(text)` under the corpus normalizer.
    pub tokens: Vec<String>,
    /// Empty only in multi-label corpora.
    pub labels: BTreeSet<ClassId>,
}

/// A contiguous n-gram of 1 to 3 normalized tokens, stored space-joined.
///
/// The space join is lossless (tokens never contain whitespace) and makes
/// `Ord` equal to lexicographic order on the token sequence, which is the
/// tie-break order used throughout ranking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NGram(String);

impl NGram {
    pub const MAX_TOKENS: usize = 3;

    /// Builds an n-gram from pre-normalized tokens.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<NGram> {
        if tokens.is_empty() {
            return Err(Error::invalid("n-gram needs at least one token"));
        }
        if tokens.len() > Self::MAX_TOKENS {
            return Err(Error::invalid(format!(
                "n-gram has {} tokens; at most {} are supported",
                tokens.len(),
                Self::MAX_TOKENS
            )));
        }
        for t in tokens {
            let t = t.as_ref();
            if t.is_empty() || t.contains(char::is_whitespace) {
                return Err(Error::invalid(format!("invalid n-gram token {t:?}")));
            }
        }
        let joined = tokens.iter().map(|t| t.as_ref()).collect::<Vec<_>>().join(" ");
        Ok(NGram(joined))
    }

    /// The space-joined form, as printed in reports.
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.0.split(' ')
    }

    pub fn token_count(&self) -> usize {
        self.0.split(' ').count()
    }

    pub(crate) fn from_window(window: &[String]) -> NGram {
        debug_assert!(!window.is_empty() && window.len() <= Self::MAX_TOKENS);
        NGram(window.join(" "))
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// All contiguous n-grams of `tokens` for n = 1..=max_n, shortest first,
/// duplicates preserved.
pub fn extract_ngrams(tokens: &[String], max_n: usize) -> Vec<NGram> {
    let max_n = max_n.min(NGram::MAX_TOKENS);
    let mut out = Vec::new();
    for n in 1..=max_n {
        if tokens.len() < n {
            break;
        }
        out.extend(tokens.windows(n).map(NGram::from_window));
    }
    out
}

/// Distinct n-grams of one document (its n-gram *set*).
pub(crate) fn distinct_ngrams(tokens: &[String], max_n: usize) -> BTreeSet<NGram> {
    extract_ngrams(tokens, max_n).into_iter().collect()
}

/// Vocabulary construction parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VocabConfig {
    /// Minimum training-set document frequency for a term to be kept.
    pub min_df: u32,
    /// Longest n-gram extracted (1..=3).
    pub max_ngram: usize,
}

impl Default for VocabConfig {
    fn default() -> Self {
        VocabConfig { min_df: 15, max_ngram: 3 }
    }
}

/// Train/test split parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitConfig {
    pub train_frac: f64,
    pub seed: u64,
    /// Per-class proportional assignment; applies to single-label corpora.
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { train_frac: 0.8, seed: 42, stratified: true }
    }
}

/// A normalized, labeled corpus with its split assignment and vocabulary.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    pub documents: Vec<Document>,
    /// Union of all document labels, sorted.
    pub classes: BTreeSet<ClassId>,
    pub label_mode: LabelMode,
    /// Split of `documents[i]` is `split[i]`. Everything starts in Train
    /// until `split_corpus` assigns a real partition.
    pub split: Vec<Split>,
    /// Training n-grams with document frequency >= min_df. Empty until
    /// `build_vocabulary` runs.
    pub vocabulary: BTreeSet<NGram>,
}

impl LabeledCorpus {
    /// Wraps pre-tokenized documents: classes and label mode are derived
    /// from the labels, every document starts in Train, and the vocabulary
    /// starts empty.
    pub fn from_documents(documents: Vec<Document>) -> LabeledCorpus {
        let classes = documents.iter().flat_map(|d| d.labels.iter().cloned()).collect();
        let label_mode = if documents.iter().all(|d| d.labels.len() == 1) {
            LabelMode::SingleLabel
        } else {
            LabelMode::MultiLabel
        };
        let split = vec![Split::Train; documents.len()];
        LabeledCorpus { documents, classes, label_mode, split, vocabulary: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Indices of documents in `split`.
    pub fn doc_indices(&self, split: Split) -> Vec<usize> {
        (0..self.documents.len()).filter(|&i| self.split[i] == split).collect()
    }

    /// Documents per class, counting a multi-label document once per label.
    pub fn class_histogram(&self) -> BTreeMap<ClassId, u32> {
        let mut hist: BTreeMap<ClassId, u32> = self.classes.iter().map(|c| (c.clone(), 0)).collect();
        for doc in &self.documents {
            for label in &doc.labels {
                *hist.get_mut(label).expect("classes covers all labels") += 1;
            }
        }
        hist
    }
}

/// Assigns every document to Train or Test, deterministically in
/// `(seed, document order)`. Stratified splits keep each class's train
/// proportion within one document of `train_frac`; multi-label corpora are
/// always split unstratified.
pub fn split_corpus(mut corpus: LabeledCorpus, cfg: &SplitConfig) -> Result<LabeledCorpus> {
    if !(cfg.train_frac > 0.0 && cfg.train_frac < 1.0) {
        return Err(Error::invalid(format!(
            "train_frac must be strictly between 0 and 1, got {}",
            cfg.train_frac
        )));
    }
    let n = corpus.documents.len();
    let mut split = vec![Split::Test; n];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let groups: Vec<Vec<usize>> = if cfg.stratified && corpus.label_mode == LabelMode::SingleLabel {
        // Classes in sorted order so the RNG consumption is reproducible.
        corpus
            .classes
            .iter()
            .map(|class| {
                (0..n).filter(|&i| corpus.documents[i].labels.contains(class)).collect()
            })
            .collect()
    } else {
        vec![(0..n).collect()]
    };

    for mut group in groups {
        group.shuffle(&mut rng);
        let n_train = ((group.len() as f64) * cfg.train_frac).round() as usize;
        for &idx in group.iter().take(n_train.min(group.len())) {
            split[idx] = Split::Train;
        }
    }

    corpus.split = split;
    Ok(corpus)
}

/// Collects every training n-gram whose training document frequency reaches
/// `min_df`. Frequency counts distinct documents, not occurrences.
pub fn build_vocabulary(corpus: &LabeledCorpus, cfg: &VocabConfig) -> Result<BTreeSet<NGram>> {
    if cfg.min_df < 1 {
        return Err(Error::invalid("min_df must be at least 1"));
    }
    if !(1..=NGram::MAX_TOKENS).contains(&cfg.max_ngram) {
        return Err(Error::invalid(format!(
            "max_ngram must be between 1 and {}, got {}",
            NGram::MAX_TOKENS,
            cfg.max_ngram
        )));
    }
    let train: Vec<&Document> = corpus
        .documents
        .iter()
        .zip(&corpus.split)
        .filter(|(_, s)| **s == Split::Train)
        .map(|(d, _)| d)
        .collect();
    if train.is_empty() {
        return Err(Error::EmptyTrainingSplit);
    }

    let df = par::count_keys(&train, |doc| {
        distinct_ngrams(&doc.tokens, cfg.max_ngram).into_iter().collect()
    });

    Ok(df.into_iter().filter(|(_, n)| *n >= cfg.min_df).map(|(g, _)| g).collect())
}

/// Loads, normalizes, splits, and builds the vocabulary in one call.
pub fn prepare_corpus(
    path: &std::path::Path,
    format: CorpusFormat,
    normalizer: &Normalizer,
    split_cfg: &SplitConfig,
    vocab_cfg: &VocabConfig,
) -> Result<LabeledCorpus> {
    let corpus = load_corpus(path, format, normalizer)?;
    let mut corpus = split_corpus(corpus, split_cfg)?;
    corpus.vocabulary = build_vocabulary(&corpus, vocab_cfg)?;
    Ok(corpus)
}
