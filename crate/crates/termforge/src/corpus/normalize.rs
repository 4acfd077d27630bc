//! Text normalization: lowercasing, alphabetic-only splitting, stopword removal.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Embedded default stopword list (classic Glasgow IR list, 318 words).
const DEFAULT_STOPWORDS: &str = include_str!("english_stopwords.txt");

/// Turns raw text into the token stream everything downstream agrees on:
/// lowercase, split on every non-alphabetic character (hyphens included),
/// empty fragments and stopwords dropped.
#[derive(Debug, Clone)]
pub struct Normalizer {
    stopwords: HashSet<String>,
}

impl Default for Normalizer {
    fn default() -> Self {
        Self::from_list(DEFAULT_STOPWORDS)
    }
}

impl Normalizer {
    /// Parses a stopword list: one token per line, `#` lines are comments,
    /// blank lines are ignored. Entries are lowercased.
    pub fn from_list(text: &str) -> Self {
        let stopwords = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Normalizer { stopwords }
    }

    /// Loads a stopword file in the format accepted by [`Normalizer::from_list`].
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_list(&text))
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    pub fn stopword_count(&self) -> usize {
        self.stopwords.len()
    }

    /// Normalizes `text` into tokens. Idempotent: normalizing the re-joined
    /// output yields the same tokens.
    pub fn normalize(&self, text: &str) -> Vec<String> {
        text.to_lowercase()
            .split(|ch: char| !ch.is_alphabetic())
            .filter(|frag| !frag.is_empty() && !self.stopwords.contains(*frag))
            .map(str::to_string)
            .collect()
    }
}
