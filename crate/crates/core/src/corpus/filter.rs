use serde::{Deserialize, Serialize};

use super::{CorpusError, TextRecord};
use crate::textnorm::{to_grid_form_joined, word_count, NormError, NormalizedWord};

/// Why a row, keyword or record was rejected. `as_str` names are the stable
/// keys used in reports and sidecar files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectRule {
    Malformed,
    Empty,
    NonAlphabet,
    TooShort,
    TooLong,
    EmptyClue,
    ClueEqualsAnswer,
    Duplicate,
    LowPopularity,
    LowRelevance,
    TooFewWords,
    TooManyWords,
}

impl RejectRule {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectRule::Malformed => "malformed",
            RejectRule::Empty => "empty",
            RejectRule::NonAlphabet => "non_alphabet",
            RejectRule::TooShort => "too_short",
            RejectRule::TooLong => "too_long",
            RejectRule::EmptyClue => "empty_clue",
            RejectRule::ClueEqualsAnswer => "clue_equals_answer",
            RejectRule::Duplicate => "duplicate",
            RejectRule::LowPopularity => "low_popularity",
            RejectRule::LowRelevance => "low_relevance",
            RejectRule::TooFewWords => "too_few_words",
            RejectRule::TooManyWords => "too_many_words",
        }
    }
}

impl std::fmt::Display for RejectRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bounds are inclusive. Answer lengths are measured in letters after
/// normalization; text lengths in tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub min_answer_len: usize,
    pub max_answer_len: usize,
    pub min_text_words: usize,
    pub max_text_words: usize,
    pub min_views: u64,
    pub min_relevance: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            min_answer_len: 3,
            max_answer_len: 20,
            min_text_words: 50,
            max_text_words: 982,
            min_views: 0,
            min_relevance: 0.0,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.min_answer_len >= self.max_answer_len {
            return Err(CorpusError::InvalidConfig("min_answer_len must be < max_answer_len".into()));
        }
        if self.min_text_words >= self.max_text_words {
            return Err(CorpusError::InvalidConfig("min_text_words must be < max_text_words".into()));
        }
        if !(self.min_relevance >= 0.0) {
            return Err(CorpusError::InvalidConfig("min_relevance must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeywordVerdict {
    Accept(NormalizedWord),
    Reject(RejectRule),
}

impl KeywordVerdict {
    pub fn accepted(self) -> Option<NormalizedWord> {
        match self {
            KeywordVerdict::Accept(w) => Some(w),
            KeywordVerdict::Reject(_) => None,
        }
    }
}

/// Accepts a keyword iff it normalizes and its letter count is within
/// `[min_answer_len, max_answer_len]`. Inner spaces are dropped first.
pub fn filter_keyword(raw: &str, cfg: &FilterConfig) -> KeywordVerdict {
    let word = match to_grid_form_joined(raw.trim()) {
        Ok(w) => w,
        Err(NormError::Empty) => return KeywordVerdict::Reject(RejectRule::Empty),
        Err(NormError::NonAlphabetCharacter { .. }) => {
            return KeywordVerdict::Reject(RejectRule::NonAlphabet)
        }
    };
    if word.len() < cfg.min_answer_len {
        KeywordVerdict::Reject(RejectRule::TooShort)
    } else if word.len() > cfg.max_answer_len {
        KeywordVerdict::Reject(RejectRule::TooLong)
    } else {
        KeywordVerdict::Accept(word)
    }
}

/// Checks popularity, relevance, text length, then keyword, and reports the
/// first failing rule.
pub fn filter_text_record(rec: &TextRecord, cfg: &FilterConfig) -> Result<NormalizedWord, RejectRule> {
    if rec.views < cfg.min_views {
        return Err(RejectRule::LowPopularity);
    }
    if !(rec.relevance >= cfg.min_relevance) {
        return Err(RejectRule::LowRelevance);
    }
    let words = word_count(&rec.text);
    if words < cfg.min_text_words {
        return Err(RejectRule::TooFewWords);
    }
    if words > cfg.max_text_words {
        return Err(RejectRule::TooManyWords);
    }
    match filter_keyword(&rec.keyword, cfg) {
        KeywordVerdict::Accept(w) => Ok(w),
        KeywordVerdict::Reject(rule) => Err(rule),
    }
}
