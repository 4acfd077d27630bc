//! Supervised term weighting and topic-query retrieval over labeled corpora.
//!
//! The pipeline: load a labeled corpus ([`corpus`]), split it and build an
//! n-gram vocabulary, index the training split ([`stats`]), score terms per
//! class under any of nineteen weighting schemes ([`weighting`]) — including
//! the FDD_β family that blends descriptive and discriminative relevance —
//! then turn top-ranked terms into disjunctive queries ([`query`]) and
//! measure their retrieval quality. [`analysis`] drives the β sweep and the
//! scheme comparison; [`report`] renders results as CSV.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
mod par;
pub mod query;
pub mod report;
pub mod stats;
pub mod weighting;

pub use analysis::{
    best_beta_for_f1, beta_sweep, build_query_lineup, compare_schemes, rank_terms, BetaGrid,
    BetaSweep, ComparisonCell, ComparisonReport, LineupEntry, SchemeAggregate, SweepEntry,
    TermScore,
};
pub use corpus::{
    build_vocabulary, extract_ngrams, load_corpus, prepare_corpus, split_corpus,
    write_canonical_jsonl, CorpusFormat, Document, LabelMode, LabeledCorpus, NGram, Normalizer,
    Split, SplitConfig, VocabConfig,
};
pub use error::{Error, Result};
pub use query::{evaluate, parse_query, Query, RetrievalMetrics};
pub use stats::{build_index, ClassFrequencyProfile, ContingencyTable, InvertedIndex};
pub use weighting::{
    descr, discr, fdd, fdd_value, igm, igm_imp, score, SchemeId, DEFAULT_LAMBDA,
};
