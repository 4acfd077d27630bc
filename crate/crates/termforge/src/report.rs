//! CSV rendering of analysis results.
//!
//! All emitters write a header row, format real numbers with six decimal
//! places, and leave non-applicable cells empty. Rows come out in the order
//! the analysis produced them, so files are byte-stable across runs.

use std::io::Write;

use crate::analysis::{BetaSweep, ComparisonReport, LineupEntry, TermScore};
use crate::corpus::{NGram, Split};
use crate::error::{Error, Result};
use crate::query::RetrievalMetrics;

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

fn write_row<W: Write>(out: &mut W, fields: &[&str]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    wtr.write_record(fields).map_err(|e| Error::invalid(e.to_string()))?;
    let buf = wtr.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    out.write_all(&buf).map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

/// `class,beta_lo,beta_hi,term,split,precision,recall,f1` — two rows per
/// sweep entry, train then test.
pub fn write_sweep_csv<W: Write>(out: &mut W, sweep: &BetaSweep) -> Result<()> {
    write_row(out, &["class", "beta_lo", "beta_hi", "term", "split", "precision", "recall", "f1"])?;
    for e in &sweep.entries {
        for (split, m) in [(Split::Train, &e.train), (Split::Test, &e.test)] {
            write_row(
                out,
                &[
                    &sweep.class,
                    &fmt(e.beta_lo),
                    &fmt(e.beta_hi),
                    e.term.as_str(),
                    split.as_str(),
                    &fmt(m.precision),
                    &fmt(m.recall),
                    &fmt(m.f1),
                ],
            )?;
        }
    }
    Ok(())
}

/// `scheme,beta,lambda,class,split,precision,recall,f1,term` — one row per
/// (scheme, class) cell, then one `(mean)` row per scheme. `beta` and
/// `lambda` are empty where the scheme has no such parameter.
pub fn write_comparison_csv<W: Write>(out: &mut W, report: &ComparisonReport) -> Result<()> {
    write_row(
        out,
        &["scheme", "beta", "lambda", "class", "split", "precision", "recall", "f1", "term"],
    )?;
    let param = |v: Option<f64>| v.map(fmt).unwrap_or_default();
    for cell in &report.cells {
        write_row(
            out,
            &[
                cell.scheme.name(),
                &param(cell.scheme.beta()),
                &param(cell.scheme.lambda()),
                &cell.class,
                report.split.as_str(),
                &fmt(cell.metrics.precision),
                &fmt(cell.metrics.recall),
                &fmt(cell.metrics.f1),
                cell.term.as_str(),
            ],
        )?;
    }
    for agg in &report.aggregates {
        write_row(
            out,
            &[
                agg.scheme.name(),
                &param(agg.scheme.beta()),
                &param(agg.scheme.lambda()),
                "(mean)",
                report.split.as_str(),
                &fmt(agg.precision),
                &fmt(agg.recall),
                &fmt(agg.f1),
                "",
            ],
        )?;
    }
    Ok(())
}

/// `class,label,terms,split,precision,recall,f1` — two rows per lineup
/// entry, train then test; terms are `|`-joined.
pub fn write_lineup_csv<W: Write>(out: &mut W, class: &str, lineup: &[LineupEntry]) -> Result<()> {
    write_row(out, &["class", "label", "terms", "split", "precision", "recall", "f1"])?;
    for e in lineup {
        let terms = e.terms.iter().map(NGram::as_str).collect::<Vec<_>>().join("|");
        for (split, m) in [(Split::Train, &e.train), (Split::Test, &e.test)] {
            write_row(
                out,
                &[
                    class,
                    e.label,
                    &terms,
                    split.as_str(),
                    &fmt(m.precision),
                    &fmt(m.recall),
                    &fmt(m.f1),
                ],
            )?;
        }
    }
    Ok(())
}

/// `class,query,split,precision,recall,f1` — a single evaluation row.
pub fn write_eval_csv<W: Write>(
    out: &mut W,
    class: &str,
    query: &str,
    split: Split,
    m: &RetrievalMetrics,
) -> Result<()> {
    write_row(out, &["class", "query", "split", "precision", "recall", "f1"])?;
    write_row(
        out,
        &[class, query, split.as_str(), &fmt(m.precision), &fmt(m.recall), &fmt(m.f1)],
    )?;
    Ok(())
}

/// `rank,term,score` — ranks are 1-based.
pub fn write_rank_csv<W: Write>(out: &mut W, ranked: &[TermScore]) -> Result<()> {
    write_row(out, &["rank", "term", "score"])?;
    for (i, s) in ranked.iter().enumerate() {
        write_row(out, &[&(i + 1).to_string(), s.term.as_str(), &fmt(s.value)])?;
    }
    Ok(())
}

/// `term,df` — the vocabulary with training document frequencies, in term
/// order.
pub fn write_vocab_csv<W: Write>(out: &mut W, index: &crate::stats::InvertedIndex) -> Result<()> {
    write_row(out, &["term", "df"])?;
    for term in index.terms() {
        write_row(out, &[term.as_str(), &index.df(term)?.to_string()])?;
    }
    Ok(())
}
