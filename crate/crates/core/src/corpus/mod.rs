//! Answer/clue corpora and text records: ingestion, the keyword and text
//! filter chain, and distribution statistics.

mod filter;
mod stats;
mod tsv;

pub use filter::{filter_keyword, filter_text_record, FilterConfig, KeywordVerdict, RejectRule};
pub use stats::{
    answer_length_histogram, category_distribution, word_count_histogram, write_category_csv,
    write_histogram_csv, LengthCounts,
};
pub use tsv::{
    filter_pairs, filter_records, ingest_pairs, read_pairs_file, read_records, rejected_sidecar_path,
    write_pairs, write_records, write_rejected, IngestOutcome, RejectedRow, RecordOutcome,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textnorm::NormalizedWord;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read source: {0}")]
    UnreadableSource(String),
    #[error("missing column {0:?} in header")]
    MissingColumn(&'static str),
    #[error("invalid filter config: {0}")]
    InvalidConfig(String),
    #[error("write failed: {0}")]
    Write(String),
}

impl From<std::io::Error> for CorpusError {
    fn from(e: std::io::Error) -> Self {
        CorpusError::UnreadableSource(e.to_string())
    }
}

/// One crossword answer with its clue and a provenance tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnswerCluePair {
    pub answer: NormalizedWord,
    pub clue: String,
    pub source: String,
}

impl AnswerCluePair {
    /// Builds a pair, rejecting empty clues and clues identical to the answer.
    pub fn new(answer: NormalizedWord, clue: impl Into<String>, source: impl Into<String>) -> Option<Self> {
        let clue = clue.into().trim().to_string();
        if clue.is_empty() {
            return None;
        }
        if crate::textnorm::to_upper_tr(&clue) == answer.as_str() {
            return None;
        }
        Some(Self { answer, clue, source: source.into() })
    }
}

/// A source text with its keyword, theme and page metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRecord {
    pub title: String,
    pub text: String,
    pub keyword: String,
    pub category: String,
    pub views: u64,
    pub relevance: f64,
    pub url: String,
}

/// Per-rule accounting for a filter or ingest pass.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub input_count: usize,
    pub accepted_count: usize,
    pub rejected_by_rule: BTreeMap<String, usize>,
}

impl FilterReport {
    pub fn accept(&mut self) {
        self.input_count += 1;
        self.accepted_count += 1;
    }

    pub fn reject(&mut self, rule: RejectRule) {
        self.input_count += 1;
        *self.rejected_by_rule.entry(rule.as_str().to_string()).or_default() += 1;
    }

    pub fn rejected_total(&self) -> usize {
        self.rejected_by_rule.values().sum()
    }

    pub fn reconciles(&self) -> bool {
        self.accepted_count + self.rejected_total() == self.input_count
    }

    /// Associative merge of two reports.
    pub fn merge(mut self, other: &FilterReport) -> FilterReport {
        self.input_count += other.input_count;
        self.accepted_count += other.accepted_count;
        for (rule, n) in &other.rejected_by_rule {
            *self.rejected_by_rule.entry(rule.clone()).or_default() += n;
        }
        self
    }

    /// Report for `self` followed by a second pass over the rows `self`
    /// accepted.
    pub fn then(mut self, next: &FilterReport) -> FilterReport {
        debug_assert_eq!(self.accepted_count, next.input_count);
        self.accepted_count = next.accepted_count;
        for (rule, n) in &next.rejected_by_rule {
            *self.rejected_by_rule.entry(rule.clone()).or_default() += n;
        }
        self
    }

    pub fn rejected(&self, rule: RejectRule) -> usize {
        self.rejected_by_rule.get(rule.as_str()).copied().unwrap_or(0)
    }
}
