//! Corpus statistics: the training-set inverted index, per-(term, class)
//! contingency tables, and per-term class frequency profiles.

use std::collections::HashMap;

use crate::corpus::{ClassId, LabeledCorpus, LabelMode, NGram, Split};
use crate::error::{Error, Result};
use crate::par;

/// Document counts for one (term, class) pair over the training split:
///
/// * `a` — documents of the class containing the term
/// * `b` — documents of the class lacking the term
/// * `c` — documents outside the class containing the term
/// * `d` — documents outside the class lacking the term
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContingencyTable {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl ContingencyTable {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        ContingencyTable { a, b, c, d }
    }

    /// Total training documents.
    pub fn n(&self) -> u32 {
        self.a + self.b + self.c + self.d
    }
}

/// Training document frequency of one term in every class, sorted by
/// descending frequency (ties by class id, ascending).
#[derive(Debug, Clone)]
pub struct ClassFrequencyProfile {
    pub term: NGram,
    /// `(class, documents of that class containing the term)`, rank 1 first.
    pub per_class: Vec<(ClassId, u32)>,
    /// Training documents belonging to the rank-1 class.
    pub d_total_max: u32,
}

impl ClassFrequencyProfile {
    /// Number of classes in the distribution.
    pub fn m(&self) -> usize {
        self.per_class.len()
    }

    /// Frequencies in rank order.
    pub fn freqs(&self) -> impl Iterator<Item = u32> + '_ {
        self.per_class.iter().map(|(_, f)| *f)
    }
}

/// Training-split inverted index plus the per-class counts every statistic
/// is derived from. Built once per corpus, then shared read-only.
#[derive(Debug)]
pub struct InvertedIndex {
    /// Vocabulary terms in ascending order.
    terms: Vec<NGram>,
    term_ids: HashMap<NGram, u32>,
    /// Per term: indices into `LabeledCorpus::documents` of the training
    /// documents containing it, ascending.
    postings: Vec<Vec<u32>>,
    /// Per term, per class index: training documents of the class containing
    /// the term (the `a` of that class).
    class_counts: Vec<Vec<u32>>,
    /// Classes in ascending order.
    classes: Vec<ClassId>,
    /// Training documents per class, parallel to `classes`.
    class_sizes: Vec<u32>,
    n_train: u32,
    label_mode: LabelMode,
}

/// Indexes the training split of a prepared corpus.
pub fn build_index(corpus: &LabeledCorpus) -> Result<InvertedIndex> {
    if corpus.vocabulary.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let terms: Vec<NGram> = corpus.vocabulary.iter().cloned().collect();
    let term_ids: HashMap<NGram, u32> =
        terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
    let max_n = terms.iter().map(|t| t.token_count()).max().unwrap_or(1);

    let classes: Vec<ClassId> = corpus.classes.iter().cloned().collect();
    let class_idx: HashMap<&str, usize> =
        classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();

    let train_docs = corpus.doc_indices(Split::Train);
    if train_docs.is_empty() {
        return Err(Error::EmptyTrainingSplit);
    }

    // Distinct vocabulary terms per training document, in parallel; the
    // merge below is sequential in document order, so postings come out
    // sorted without further work.
    let per_doc: Vec<Vec<u32>> = par::map_vec(&train_docs, |&di| {
        let doc = &corpus.documents[di];
        let mut ids: Vec<u32> = crate::corpus::distinct_ngrams(&doc.tokens, max_n)
            .iter()
            .filter_map(|g| term_ids.get(g).copied())
            .collect();
        ids.sort_unstable();
        ids
    });

    let mut postings = vec![Vec::new(); terms.len()];
    let mut class_counts = vec![vec![0u32; classes.len()]; terms.len()];
    let mut class_sizes = vec![0u32; classes.len()];
    for (doc_pos, &di) in train_docs.iter().enumerate() {
        let doc = &corpus.documents[di];
        let label_ids: Vec<usize> =
            doc.labels.iter().map(|l| class_idx[l.as_str()]).collect();
        for &ci in &label_ids {
            class_sizes[ci] += 1;
        }
        for &tid in &per_doc[doc_pos] {
            postings[tid as usize].push(di as u32);
            for &ci in &label_ids {
                class_counts[tid as usize][ci] += 1;
            }
        }
    }

    Ok(InvertedIndex {
        terms,
        term_ids,
        postings,
        class_counts,
        classes,
        class_sizes,
        n_train: train_docs.len() as u32,
        label_mode: corpus.label_mode,
    })
}

impl InvertedIndex {
    pub fn n_train(&self) -> u32 {
        self.n_train
    }

    pub fn label_mode(&self) -> LabelMode {
        self.label_mode
    }

    /// Vocabulary in ascending order.
    pub fn terms(&self) -> &[NGram] {
        &self.terms
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.classes
    }

    pub fn class_size(&self, class: &str) -> Option<u32> {
        self.class_index(class).map(|i| self.class_sizes[i])
    }

    fn class_index(&self, class: &str) -> Option<usize> {
        self.classes.binary_search_by(|c| c.as_str().cmp(class)).ok()
    }

    fn term_id(&self, term: &NGram) -> Result<usize> {
        self.term_ids
            .get(term)
            .map(|&i| i as usize)
            .ok_or_else(|| Error::UnknownTerm(term.as_str().to_string()))
    }

    /// Training documents containing `term`, as indices into
    /// `LabeledCorpus::documents` (ascending).
    pub fn postings(&self, term: &NGram) -> Result<&[u32]> {
        Ok(&self.postings[self.term_id(term)?])
    }

    /// Training document frequency of `term`.
    pub fn df(&self, term: &NGram) -> Result<u32> {
        Ok(self.postings[self.term_id(term)?].len() as u32)
    }

    /// The (A, B, C, D) table for `term` against `class`. In multi-label
    /// corpora the class is reduced to in-class vs out-of-class.
    pub fn contingency(&self, term: &NGram, class: &str) -> Result<ContingencyTable> {
        let tid = self.term_id(term)?;
        let ci = self
            .class_index(class)
            .ok_or_else(|| Error::UnknownClass(class.to_string()))?;
        let a = self.class_counts[tid][ci];
        let size = self.class_sizes[ci];
        let df = self.postings[tid].len() as u32;
        let b = size - a;
        let c = df - a;
        let d = self.n_train - size - c;
        Ok(ContingencyTable { a, b, c, d })
    }

    /// Full class-frequency distribution of `term` over every class, sorted
    /// by descending frequency, ties by class id ascending. This is the
    /// profile single-label scoring uses.
    pub fn class_profile(&self, term: &NGram) -> Result<ClassFrequencyProfile> {
        let tid = self.term_id(term)?;
        let mut per_class: Vec<(ClassId, u32)> = self
            .classes
            .iter()
            .zip(&self.class_counts[tid])
            .map(|(c, &f)| (c.clone(), f))
            .collect();
        per_class.sort_by(|(ca, fa), (cb, fb)| fb.cmp(fa).then_with(|| ca.cmp(cb)));
        let d_total_max = per_class
            .first()
            .map(|(c, _)| self.class_sizes[self.class_index(c).expect("own class")])
            .unwrap_or(0);
        Ok(ClassFrequencyProfile { term: term.clone(), per_class, d_total_max })
    }

    /// Two-class (in-class vs out-of-class) profile of `term` for `class`,
    /// the reduction multi-label scoring uses. Ties rank the in-class side
    /// first.
    pub fn binary_profile(&self, term: &NGram, class: &str) -> Result<ClassFrequencyProfile> {
        let table = self.contingency(term, class)?;
        let in_size = table.a + table.b;
        let out_size = table.c + table.d;
        let in_entry = (class.to_string(), table.a);
        let out_entry = (format!("not-{class}"), table.c);
        let (per_class, d_total_max) = if table.a >= table.c {
            (vec![in_entry, out_entry], in_size)
        } else {
            (vec![out_entry, in_entry], out_size)
        };
        Ok(ClassFrequencyProfile { term: term.clone(), per_class, d_total_max })
    }

    /// The profile scoring should use for `(term, class)` under this
    /// corpus's label mode.
    pub fn profile_for(&self, term: &NGram, class: &str) -> Result<ClassFrequencyProfile> {
        match self.label_mode {
            LabelMode::SingleLabel => self.class_profile(term),
            LabelMode::MultiLabel => self.binary_profile(term, class),
        }
    }
}
