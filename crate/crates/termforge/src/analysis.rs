//! Ranking, the β sweep, scheme comparison, and the fixed query lineup.
//!
//! Everything here composes the lower layers: score vocabulary terms per
//! class, pick top terms, turn them into disjunctive queries, and measure
//! retrieval quality on the train and test splits. All ties break toward
//! the lexicographically smaller term, and all aggregate means are summed
//! sequentially, so outputs are bit-stable across runs and feature flags.

use crate::corpus::{ClassId, LabeledCorpus, NGram, Split};
use crate::error::{Error, Result};
use crate::par;
use crate::query::{evaluate, Query, RetrievalMetrics};
use crate::stats::{ContingencyTable, InvertedIndex};
use crate::weighting::{descr, discr, fdd_value, score, SchemeId};

/// One scored term for one class under one scheme.
#[derive(Debug, Clone)]
pub struct TermScore {
    pub term: NGram,
    pub class: ClassId,
    pub scheme: String,
    pub value: f64,
}

/// Scores every vocabulary term for `class` under `scheme` and returns the
/// top `top_k` (fewer if the vocabulary is smaller), sorted by descending
/// value, ties by term ascending.
pub fn rank_terms(
    index: &InvertedIndex,
    scheme: &SchemeId,
    class: &str,
    top_k: usize,
) -> Result<Vec<TermScore>> {
    if top_k == 0 {
        return Err(Error::invalid("top_k must be at least 1"));
    }
    if index.class_size(class).is_none() {
        return Err(Error::UnknownClass(class.to_string()));
    }
    let needs_profile = scheme.needs_profile();
    let scored = par::map_vec(index.terms(), |term| -> Result<f64> {
        let table = index.contingency(term, class)?;
        let profile = if needs_profile { Some(index.profile_for(term, class)?) } else { None };
        score(scheme, &table, profile.as_ref())
    });
    let mut ranked = Vec::with_capacity(scored.len());
    for (tid, value) in scored.into_iter().enumerate() {
        ranked.push((tid, value?));
    }
    sort_ranked(&mut ranked, index);
    ranked.truncate(top_k);
    Ok(ranked
        .into_iter()
        .map(|(tid, value)| TermScore {
            term: index.terms()[tid].clone(),
            class: class.to_string(),
            scheme: scheme.name().to_string(),
            value,
        })
        .collect())
}

/// Descending by value, ties by term ascending. Values are finite by
/// construction, so the comparison is total.
fn sort_ranked(ranked: &mut [(usize, f64)], index: &InvertedIndex) {
    ranked.sort_by(|(ta, va), (tb, vb)| {
        vb.partial_cmp(va)
            .expect("scheme values are finite")
            .then_with(|| index.terms()[*ta].cmp(&index.terms()[*tb]))
    });
}

/// Top terms under a plain table functional (used for the DESCR- and
/// DISCR-ranked lineup queries).
fn rank_by<F>(index: &InvertedIndex, class: &str, key: F, top_k: usize) -> Result<Vec<NGram>>
where
    F: Fn(&ContingencyTable) -> f64 + Sync + Send,
{
    let scored = par::map_vec(index.terms(), |term| -> Result<f64> {
        Ok(key(&index.contingency(term, class)?))
    });
    let mut ranked = Vec::with_capacity(scored.len());
    for (tid, value) in scored.into_iter().enumerate() {
        ranked.push((tid, value?));
    }
    sort_ranked(&mut ranked, index);
    ranked.truncate(top_k);
    Ok(ranked.into_iter().map(|(tid, _)| index.terms()[tid].clone()).collect())
}

/// A half-open β interval [lo, hi) sampled every `step`.
#[derive(Debug, Clone, Copy)]
pub struct BetaGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for BetaGrid {
    fn default() -> Self {
        BetaGrid { lo: 0.0, hi: 10.0, step: 0.01 }
    }
}

impl BetaGrid {
    const MAX_POINTS: usize = 10_000_000;

    pub fn new(lo: f64, hi: f64, step: f64) -> Result<BetaGrid> {
        let grid = BetaGrid { lo, hi, step };
        grid.n_points()?;
        Ok(grid)
    }

    /// Number of sample points; β_i = lo + i·step for i in 0..n.
    pub fn n_points(&self) -> Result<usize> {
        if !(self.lo.is_finite() && self.lo >= 0.0) {
            return Err(Error::invalid(format!("beta lo must be finite and >= 0, got {}", self.lo)));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::invalid(format!("beta step must be positive, got {}", self.step)));
        }
        if !(self.hi.is_finite() && self.hi > self.lo) {
            return Err(Error::invalid(format!(
                "beta hi must exceed lo, got [{}, {})",
                self.lo, self.hi
            )));
        }
        let n = ((self.hi - self.lo) / self.step).round();
        if n < 1.0 {
            return Err(Error::invalid("beta grid contains no points"));
        }
        if n > Self::MAX_POINTS as f64 {
            return Err(Error::invalid(format!(
                "beta grid has {n:.0} points; at most {} are supported",
                Self::MAX_POINTS
            )));
        }
        Ok(n as usize)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + (i as f64) * self.step
    }
}

/// One run of β values sharing a best term, with that term's single-term
/// query evaluated on both splits.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    /// Closed lower end of the β run.
    pub beta_lo: f64,
    /// Open upper end of the β run; consecutive entries tile [lo, hi).
    pub beta_hi: f64,
    pub term: NGram,
    pub train: RetrievalMetrics,
    pub test: RetrievalMetrics,
}

/// The β sweep for one class: which term FDD_β ranks first as β moves over
/// the grid, merged into maximal runs.
#[derive(Debug, Clone)]
pub struct BetaSweep {
    pub class: ClassId,
    pub grid: BetaGrid,
    pub entries: Vec<SweepEntry>,
}

/// Sweeps β over `grid`, recording the FDD-top term at every sample point
/// and merging equal neighbors. Ties at a point keep the lexicographically
/// smallest term.
pub fn beta_sweep(
    corpus: &LabeledCorpus,
    index: &InvertedIndex,
    class: &str,
    grid: BetaGrid,
) -> Result<BetaSweep> {
    let n = grid.n_points()?;
    if index.class_size(class).is_none() {
        return Err(Error::UnknownClass(class.to_string()));
    }
    // DESCR/DISCR per term, computed once: FDD at any β is a function of the
    // pair, so the sweep never re-touches the index.
    let relevances = par::map_vec(index.terms(), |term| -> Result<(f64, f64)> {
        let table = index.contingency(term, class)?;
        Ok((descr(&table), discr(&table)))
    });
    let mut rel = Vec::with_capacity(relevances.len());
    for r in relevances {
        rel.push(r?);
    }
    if rel.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let winners = par::map_range(n, |i| {
        let beta = grid.point(i);
        let mut best = 0usize;
        let mut best_value = f64::NEG_INFINITY;
        for (tid, &(e, d)) in rel.iter().enumerate() {
            let value = fdd_value(e, d, beta);
            if value > best_value {
                best_value = value;
                best = tid;
            }
        }
        best
    });
    let mut entries = Vec::new();
    let mut start = 0usize;
    for i in 1..=n {
        if i < n && winners[i] == winners[start] {
            continue;
        }
        let term = index.terms()[winners[start]].clone();
        let query = Query::build_disjunction(vec![term.clone()])?;
        entries.push(SweepEntry {
            beta_lo: grid.point(start),
            beta_hi: if i == n { grid.hi } else { grid.point(i) },
            term,
            train: evaluate(corpus, &query, class, Split::Train)?,
            test: evaluate(corpus, &query, class, Split::Test)?,
        });
        start = i;
    }
    Ok(BetaSweep { class: class.to_string(), grid, entries })
}

/// The sweep entry with the best training F1; ties go to the smaller β.
pub fn best_beta_for_f1(sweep: &BetaSweep) -> Result<&SweepEntry> {
    sweep
        .entries
        .iter()
        .reduce(|best, e| if e.train.f1 > best.train.f1 { e } else { best })
        .ok_or_else(|| Error::invalid("sweep has no entries"))
}

/// One (scheme, class) comparison cell: the scheme's top term as a
/// single-term query, evaluated on the report's split.
#[derive(Debug, Clone)]
pub struct ComparisonCell {
    pub scheme: SchemeId,
    pub class: ClassId,
    pub term: NGram,
    pub metrics: RetrievalMetrics,
}

/// Per-scheme means over the report's classes.
#[derive(Debug, Clone)]
pub struct SchemeAggregate {
    pub scheme: SchemeId,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// A scheme-by-class comparison on one split.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub split: Split,
    pub cells: Vec<ComparisonCell>,
    pub aggregates: Vec<SchemeAggregate>,
}

/// For every scheme and class: rank terms, take the top one, evaluate it as
/// a single-term query on `split`. Aggregates are plain sequential means
/// over classes, one per scheme.
pub fn compare_schemes(
    corpus: &LabeledCorpus,
    index: &InvertedIndex,
    schemes: &[SchemeId],
    classes: &[ClassId],
    split: Split,
) -> Result<ComparisonReport> {
    if schemes.is_empty() {
        return Err(Error::invalid("comparison needs at least one scheme"));
    }
    if classes.is_empty() {
        return Err(Error::invalid("comparison needs at least one class"));
    }
    let mut cells = Vec::with_capacity(schemes.len() * classes.len());
    let mut aggregates = Vec::with_capacity(schemes.len());
    for scheme in schemes {
        let (mut p_sum, mut r_sum, mut f_sum) = (0.0f64, 0.0f64, 0.0f64);
        for class in classes {
            let top = rank_terms(index, scheme, class, 1)?;
            let top = top.into_iter().next().ok_or(Error::EmptyVocabulary)?;
            let query = Query::build_disjunction(vec![top.term.clone()])?;
            let metrics = evaluate(corpus, &query, class, split)?;
            p_sum += metrics.precision;
            r_sum += metrics.recall;
            f_sum += metrics.f1;
            cells.push(ComparisonCell {
                scheme: scheme.clone(),
                class: class.clone(),
                term: top.term,
                metrics,
            });
        }
        let m = classes.len() as f64;
        aggregates.push(SchemeAggregate {
            scheme: scheme.clone(),
            precision: p_sum / m,
            recall: r_sum / m,
            f1: f_sum / m,
        });
    }
    Ok(ComparisonReport { split, cells, aggregates })
}

/// One lineup query: a fixed label, the terms behind it, and metrics on
/// both splits.
#[derive(Debug, Clone)]
pub struct LineupEntry {
    pub label: &'static str,
    pub terms: Vec<NGram>,
    pub train: RetrievalMetrics,
    pub test: RetrievalMetrics,
}

/// The seven standard queries for a class: top-2/top-3 disjunctions under
/// FDD₁, DISCR, and DESCR, plus the DISCR-top/DESCR-top pair (collapsed to
/// one term when both rankings agree). Needs at least three vocabulary
/// terms.
pub fn build_query_lineup(
    corpus: &LabeledCorpus,
    index: &InvertedIndex,
    class: &str,
) -> Result<Vec<LineupEntry>> {
    if index.terms().len() < 3 {
        return Err(Error::invalid(format!(
            "query lineup needs at least 3 vocabulary terms, found {}",
            index.terms().len()
        )));
    }
    let fdd_top: Vec<NGram> = rank_terms(index, &SchemeId::Fdd { beta: 1.0 }, class, 3)?
        .into_iter()
        .map(|s| s.term)
        .collect();
    let discr_top = rank_by(index, class, discr, 3)?;
    let descr_top = rank_by(index, class, descr, 3)?;

    let mut pair = vec![discr_top[0].clone()];
    if descr_top[0] != discr_top[0] {
        pair.push(descr_top[0].clone());
    }

    let plan: [(&'static str, Vec<NGram>); 7] = [
        ("FDD1_1|FDD1_2", fdd_top[..2].to_vec()),
        ("FDD1_1|FDD1_2|FDD1_3", fdd_top.clone()),
        ("DISCR1|DISCR2", discr_top[..2].to_vec()),
        ("DISCR1|DISCR2|DISCR3", discr_top.clone()),
        ("DESCR1|DESCR2", descr_top[..2].to_vec()),
        ("DESCR1|DESCR2|DESCR3", descr_top.clone()),
        ("DISCR1|DESCR1", pair),
    ];
    let mut entries = Vec::with_capacity(plan.len());
    for (label, terms) in plan {
        let query = Query::build_disjunction(terms.clone())?;
        entries.push(LineupEntry {
            label,
            terms,
            train: evaluate(corpus, &query, class, Split::Train)?,
            test: evaluate(corpus, &query, class, Split::Test)?,
        });
    }
    Ok(entries)
}
