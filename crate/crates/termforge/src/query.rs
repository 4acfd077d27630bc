//! Disjunctive n-gram queries and their retrieval evaluation.
//!
//! A query is an OR over n-grams. A document matches when any query term
//! occurs as a contiguous run of its normalized tokens. Evaluating a query
//! against a split treats one class as the relevant set and reports
//! precision, recall, and F1.

use serde::Serialize;

use crate::corpus::{LabeledCorpus, NGram, Split};
use crate::error::{Error, Result};
use crate::par;

/// A disjunction of n-grams, kept in the order given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    terms: Vec<NGram>,
}

impl Query {
    /// Builds an OR query. The term list must be non-empty and free of
    /// duplicates; order is preserved.
    pub fn build_disjunction(terms: Vec<NGram>) -> Result<Query> {
        if terms.is_empty() {
            return Err(Error::invalid("a query needs at least one term"));
        }
        for (i, term) in terms.iter().enumerate() {
            if terms[..i].contains(term) {
                return Err(Error::invalid(format!("duplicate query term {:?}", term.as_str())));
            }
        }
        Ok(Query { terms })
    }

    pub fn terms(&self) -> &[NGram] {
        &self.terms
    }

    /// The query in `a|b c|d` form.
    pub fn display(&self) -> String {
        self.terms.iter().map(NGram::as_str).collect::<Vec<_>>().join("|")
    }

    /// Whether `tokens` contains any query term as a contiguous window.
    pub fn matches(&self, tokens: &[String]) -> bool {
        self.terms.iter().any(|term| contains_ngram(tokens, term))
    }
}

/// Whether `term`'s tokens appear as a contiguous window of `tokens`.
fn contains_ngram(tokens: &[String], term: &NGram) -> bool {
    let needle: Vec<&str> = term.tokens().collect();
    if needle.is_empty() || needle.len() > tokens.len() {
        return false;
    }
    tokens.windows(needle.len()).any(|w| w.iter().map(String::as_str).eq(needle.iter().copied()))
}

/// Parses `a|b c|d` into a query, normalizing each segment with the same
/// pipeline as document text. Reports the byte offset of an offending
/// segment.
pub fn parse_query(input: &str, normalizer: &crate::corpus::Normalizer) -> Result<Query> {
    let mut terms = Vec::new();
    let mut offset = 0usize;
    for segment in input.split('|') {
        let tokens = normalizer.normalize(segment);
        if tokens.is_empty() {
            return Err(Error::QuerySyntax {
                offset,
                message: format!("segment {segment:?} normalizes to nothing"),
            });
        }
        let term = NGram::from_tokens(&tokens.iter().map(String::as_str).collect::<Vec<_>>())
            .map_err(|e| Error::QuerySyntax { offset, message: e.to_string() })?;
        terms.push(term);
        offset += segment.len() + 1;
    }
    Query::build_disjunction(terms)
}

/// Retrieval quality of one query for one class on one split.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RetrievalMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Documents the query matched.
    pub retrieved: u32,
    /// Documents labeled with the class.
    pub relevant: u32,
    /// Matched documents labeled with the class.
    pub hits: u32,
}

impl RetrievalMetrics {
    fn from_counts(retrieved: u32, relevant: u32, hits: u32) -> RetrievalMetrics {
        let precision = if retrieved == 0 { 0.0 } else { f64::from(hits) / f64::from(retrieved) };
        let recall = if relevant == 0 { 0.0 } else { f64::from(hits) / f64::from(relevant) };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        RetrievalMetrics { precision, recall, f1, retrieved, relevant, hits }
    }
}

/// Runs `query` over the documents of `split`, with `class` as the relevant
/// set. A class absent from the split is an error, not a zero.
pub fn evaluate(
    corpus: &LabeledCorpus,
    query: &Query,
    class: &str,
    split: Split,
) -> Result<RetrievalMetrics> {
    if !corpus.classes.iter().any(|c| c == class) {
        return Err(Error::UnknownClass(class.to_string()));
    }
    let doc_indices = corpus.doc_indices(split);
    let outcomes = par::map_vec(&doc_indices, |&i| {
        let doc = &corpus.documents[i];
        let matched = query.matches(&doc.tokens);
        let relevant = doc.labels.contains(class);
        (matched, relevant)
    });
    let mut retrieved = 0u32;
    let mut relevant = 0u32;
    let mut hits = 0u32;
    for (matched, is_rel) in outcomes {
        if matched {
            retrieved += 1;
        }
        if is_rel {
            relevant += 1;
        }
        if matched && is_rel {
            hits += 1;
        }
    }
    if relevant == 0 {
        return Err(Error::DegenerateClass { class: class.to_string(), split: split.as_str() });
    }
    Ok(RetrievalMetrics::from_counts(retrieved, relevant, hits))
}
