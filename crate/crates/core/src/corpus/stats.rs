use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{AnswerCluePair, CorpusError, TextRecord};
use crate::textnorm::word_count;

/// Counts for one answer length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthCounts {
    pub pairs: usize,
    pub unique_answers: usize,
    pub unique_pairs: usize,
}

/// Answer-length distribution: all pairs, unique answers and unique pairs per
/// length.
pub fn answer_length_histogram(pairs: &[AnswerCluePair]) -> BTreeMap<usize, LengthCounts> {
    let mut hist: BTreeMap<usize, LengthCounts> = BTreeMap::new();
    let mut answers = HashSet::new();
    let mut unique = HashSet::new();
    for p in pairs {
        let slot = hist.entry(p.answer.len()).or_default();
        slot.pairs += 1;
        if answers.insert(&p.answer) {
            slot.unique_answers += 1;
        }
        if unique.insert((&p.answer, &p.clue)) {
            slot.unique_pairs += 1;
        }
    }
    hist
}

pub fn category_distribution(records: &[TextRecord]) -> BTreeMap<String, usize> {
    let mut dist = BTreeMap::new();
    for r in records {
        *dist.entry(r.category.clone()).or_default() += 1;
    }
    dist
}

/// Token-count distribution over arbitrary texts (record bodies or clues).
pub fn word_count_histogram<'a>(texts: impl IntoIterator<Item = &'a str>) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for t in texts {
        *hist.entry(word_count(t)).or_default() += 1;
    }
    hist
}

fn write_err(e: impl std::fmt::Display) -> CorpusError {
    CorpusError::Write(e.to_string())
}

/// `length,pairs,unique_answers,unique_pairs`
pub fn write_histogram_csv<W: Write>(writer: W, hist: &BTreeMap<usize, LengthCounts>) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["length", "pairs", "unique_answers", "unique_pairs"]).map_err(write_err)?;
    for (len, c) in hist {
        w.write_record([len.to_string(), c.pairs.to_string(), c.unique_answers.to_string(), c.unique_pairs.to_string()])
            .map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

/// `category,count`
pub fn write_category_csv<W: Write>(writer: W, dist: &BTreeMap<String, usize>) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["category", "count"]).map_err(write_err)?;
    for (cat, n) in dist {
        w.write_record([cat.as_str(), &n.to_string()]).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}
