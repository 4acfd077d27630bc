//! Shared test support: an independent re-derivation of every weighting
//! formula, a brute-force nested-loop reference for contingency counting
//! and retrieval evaluation, and seeded synthetic corpus generators.
//!
//! Nothing here calls the library's scoring or indexing code — that's the
//! point. Formulas are written straight from their printed definitions with
//! a pluggable logarithm so tests can also check that the log-base choice
//! never changes a ranking.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use termforge::{Document, LabeledCorpus, NGram, Split};

/// Relative-or-absolute tolerance: |x - y| <= eps * max(1, |y|).
pub fn close(x: f64, y: f64, eps: f64) -> bool {
    (x - y).abs() <= eps * y.abs().max(1.0)
}

// ---------------------------------------------------------------------------
// Independent scheme oracle
// ---------------------------------------------------------------------------

pub fn o_descr(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

pub fn o_discr(a: f64, c: f64) -> f64 {
    if a + c == 0.0 {
        0.0
    } else {
        a / (a + c)
    }
}

pub fn o_fdd(a: f64, b: f64, c: f64, beta: f64) -> f64 {
    let e = o_descr(a, b);
    let i = o_discr(a, c);
    if e <= 0.0 || i <= 0.0 {
        return 0.0;
    }
    if beta == 0.0 {
        return i;
    }
    let b2 = beta * beta;
    (1.0 + b2) * (i * e) / (b2 * i + e)
}

pub fn o_igm(freqs: &[u32]) -> f64 {
    let f1 = f64::from(freqs[0]);
    let denom: f64 = freqs.iter().enumerate().map(|(i, &f)| f64::from(f) * (i as f64 + 1.0)).sum();
    f1 / denom
}

pub fn o_igm_imp(freqs: &[u32], d_total_max: u32) -> f64 {
    let f1 = f64::from(freqs[0]);
    let sum: f64 = freqs.iter().enumerate().map(|(i, &f)| f64::from(f) * (i as f64 + 1.0)).sum();
    f1 / (sum + (f64::from(d_total_max) / f1).log10())
}

/// Every scheme, recomputed from its printed definition. `lg` is the
/// logarithm convention (natural in production); the IGM-imp correction is
/// base-10 by definition and ignores `lg`. IGM profiles are the in/out
/// binary reduction of the table, ties ranking the in-class side first.
pub fn o_scheme(name: &str, a: u32, b: u32, c: u32, d: u32, lambda: f64, lg: &dyn Fn(f64) -> f64) -> f64 {
    let (af, bf, cf, df) = (f64::from(a), f64::from(b), f64::from(c), f64::from(d));
    let n = af + bf + cf + df;
    let idfec = lg((cf + df).max(1.0) / cf.max(1.0));
    let xlgx = |x: f64| if x == 0.0 { 0.0 } else { x * lg(x) };
    let ig = {
        let t1 = (af / n) * lg(af.max(1.0) / (af + cf));
        let t2 = xlgx((af + bf) / n);
        let t3 = if b == 0 { 0.0 } else { (bf / n) * lg(bf / (bf + df)) };
        t1 - t2 + t3
    };
    let (freqs, dmax) = binary_profile(a, b, c, d);
    match name {
        "tgf" => af + cf,
        "idf" => lg(n / (af + cf)),
        "tgf-star" => af,
        "tgf-star-idfec" => af * idfec,
        "chi2" => {
            let den = (af + cf) * (bf + df) * (af + bf) * (cf + df);
            if den == 0.0 {
                0.0
            } else {
                let diff = af * df - bf * cf;
                n * diff * diff / den
            }
        }
        "or" => lg((af.max(1.0) * df).max(1.0) / (bf * cf).max(1.0)),
        "ig" => ig,
        "gr" => {
            let entropy = -xlgx((af + bf) / n) - xlgx((cf + df) / n);
            if entropy == 0.0 {
                0.0
            } else {
                ig / entropy
            }
        }
        "gss" | "idfec-b" => lg(2.0 + (af + cf + df) / cf.max(1.0)),
        "prob" => lg(1.0 + (af / bf.max(1.0)) * (af / cf.max(1.0))),
        "rf" => lg(2.0 + af / cf.max(1.0)),
        "idfec" => idfec,
        "tgf-idfec" => (af + cf) * idfec,
        "mi" => lg(n * af.max(1.0) / ((af + bf).max(1.0) * (af + cf).max(1.0))),
        "tgf-star-igm" => af * (1.0 + lambda * o_igm(&freqs)),
        "tgf-star-igm-imp" => af * (1.0 + lambda * o_igm_imp(&freqs, dmax)),
        "sqrt-tgf-star-igm-imp" => af.sqrt() * (1.0 + lambda * o_igm_imp(&freqs, dmax)),
        other => panic!("oracle knows no scheme {other:?}"),
    }
}

/// The in/out two-class frequency profile of a table: ranked by descending
/// frequency, in-class first on ties; d_total_max is the rank-1 side's size.
pub fn binary_profile(a: u32, b: u32, c: u32, d: u32) -> (Vec<u32>, u32) {
    if a >= c {
        (vec![a, c], a + b)
    } else {
        (vec![c, a], c + d)
    }
}

/// The 18 profile-free scheme names plus the IGM family — everything
/// `o_scheme` accepts.
pub const ORACLE_SCHEMES: [&str; 18] = [
    "tgf",
    "idf",
    "tgf-star",
    "tgf-star-idfec",
    "chi2",
    "or",
    "ig",
    "gr",
    "gss",
    "prob",
    "rf",
    "idfec",
    "tgf-idfec",
    "mi",
    "idfec-b",
    "tgf-star-igm",
    "tgf-star-igm-imp",
    "sqrt-tgf-star-igm-imp",
];

// ---------------------------------------------------------------------------
// Brute-force reference
// ---------------------------------------------------------------------------

/// All distinct contiguous 1..=max_n token windows of a document, by plain
/// nested loops.
pub fn distinct_windows(tokens: &[String], max_n: usize) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    for n in 1..=max_n {
        if n > tokens.len() {
            break;
        }
        for start in 0..=(tokens.len() - n) {
            set.insert(tokens[start..start + n].join(" "));
        }
    }
    set
}

/// (A, B, C, D) for `term` against `class` over the training split, counted
/// document by document.
pub fn brute_contingency(corpus: &LabeledCorpus, term: &str, class: &str, max_n: usize) -> (u32, u32, u32, u32) {
    let (mut a, mut b, mut c, mut d) = (0u32, 0u32, 0u32, 0u32);
    for (i, doc) in corpus.documents.iter().enumerate() {
        if corpus.split[i] != Split::Train {
            continue;
        }
        let has = distinct_windows(&doc.tokens, max_n).contains(term);
        let in_class = doc.labels.contains(class);
        match (in_class, has) {
            (true, true) => a += 1,
            (true, false) => b += 1,
            (false, true) => c += 1,
            (false, false) => d += 1,
        }
    }
    (a, b, c, d)
}

/// (retrieved, relevant, hits) for a disjunctive query over one split,
/// counted document by document.
pub fn brute_evaluate(
    corpus: &LabeledCorpus,
    terms: &[&str],
    class: &str,
    split: Split,
    max_n: usize,
) -> (u32, u32, u32) {
    let (mut retrieved, mut relevant, mut hits) = (0u32, 0u32, 0u32);
    for (i, doc) in corpus.documents.iter().enumerate() {
        if corpus.split[i] != split {
            continue;
        }
        let windows = distinct_windows(&doc.tokens, max_n);
        let matched = terms.iter().any(|t| windows.contains(*t));
        let is_rel = doc.labels.contains(class);
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
    (retrieved, relevant, hits)
}

pub fn brute_metrics(retrieved: u32, relevant: u32, hits: u32) -> (f64, f64, f64) {
    let p = if retrieved == 0 { 0.0 } else { f64::from(hits) / f64::from(retrieved) };
    let r = if relevant == 0 { 0.0 } else { f64::from(hits) / f64::from(relevant) };
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f1)
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

/// A pool of lowercase alphabetic pseudo-words: "waa", "wab", ...
pub fn word_pool(size: usize) -> Vec<String> {
    (0..size)
        .map(|i| {
            let hi = (b'a' + (i / 26) as u8) as char;
            let lo = (b'a' + (i % 26) as u8) as char;
            format!("w{hi}{lo}")
        })
        .collect()
}

pub struct RandomCorpusSpec {
    pub max_docs: usize,
    pub max_classes: usize,
    pub pool_size: usize,
    pub max_ngram: usize,
    pub multi_label: bool,
}

/// A random corpus within `spec`'s bounds, with tokens drawn straight from
/// the pool (no text normalization involved) and every document assigned to
/// a split at random (at least one training document guaranteed).
pub fn random_corpus(rng: &mut ChaCha8Rng, spec: &RandomCorpusSpec) -> LabeledCorpus {
    let n_docs = rng.random_range(5..=spec.max_docs);
    let n_classes = rng.random_range(1..=spec.max_classes);
    let pool = word_pool(spec.pool_size);
    let classes: Vec<String> = (0..n_classes).map(|i| format!("k{i}")).collect();
    let mut docs = Vec::with_capacity(n_docs);
    for i in 0..n_docs {
        let len = rng.random_range(1..=12);
        let tokens: Vec<String> =
            (0..len).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
        let n_labels = if spec.multi_label { rng.random_range(1..=3.min(n_classes)) } else { 1 };
        let mut labels = BTreeSet::new();
        while labels.len() < n_labels {
            labels.insert(classes[rng.random_range(0..n_classes)].clone());
        }
        docs.push(Document {
            id: format!("d{i}"),
            text: tokens.join(" "),
            tokens,
            labels,
        });
    }
    let mut corpus = LabeledCorpus::from_documents(docs);
    corpus.split = (0..n_docs)
        .map(|_| if rng.random_bool(0.75) { Split::Train } else { Split::Test })
        .collect();
    if !corpus.split.contains(&Split::Train) {
        corpus.split[0] = Split::Train;
    }
    corpus.vocabulary = termforge::build_vocabulary(
        &corpus,
        &termforge::VocabConfig { min_df: 1, max_ngram: spec.max_ngram },
    )
    .expect("train split is non-empty by construction");
    corpus
}

/// Turns a space-joined window back into an NGram.
pub fn ngram(s: &str) -> NGram {
    NGram::from_tokens(&s.split(' ').collect::<Vec<_>>()).unwrap()
}

/// A deterministic labeled corpus written as (text, label, split) triples,
/// tokenized by whitespace (no normalization), with a unigram min_df = 1
/// vocabulary unless `max_ngram` says otherwise.
pub fn corpus_from(parts: &[(&str, &str, Split)], max_ngram: usize) -> LabeledCorpus {
    let docs: Vec<Document> = parts
        .iter()
        .enumerate()
        .map(|(i, (text, label, _))| Document {
            id: format!("d{i}"),
            text: text.to_string(),
            tokens: text.split_whitespace().map(str::to_string).collect(),
            labels: BTreeSet::from([label.to_string()]),
        })
        .collect();
    let mut corpus = LabeledCorpus::from_documents(docs);
    corpus.split = parts.iter().map(|(_, _, s)| *s).collect();
    corpus.vocabulary =
        termforge::build_vocabulary(&corpus, &termforge::VocabConfig { min_df: 1, max_ngram })
            .unwrap();
    corpus
}

/// Seeded RNG for reproducible test corpora.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
