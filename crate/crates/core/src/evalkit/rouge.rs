use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::textnorm::tokenize_words;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        Self { precision, recall, f1 }
    }

    /// `overlap / candidate_units`, `overlap / reference_units`; zero when
    /// either side is empty.
    pub fn from_counts(overlap: usize, candidate_units: usize, reference_units: usize) -> Self {
        if candidate_units == 0 || reference_units == 0 {
            return Self::default();
        }
        Self::from_pr(overlap as f64 / candidate_units as f64, overlap as f64 / reference_units as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "rouge-1")]
    Rouge1,
    #[serde(rename = "rouge-2")]
    Rouge2,
    #[serde(rename = "rouge-l")]
    RougeL,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rouge1, Metric::Rouge2, Metric::RougeL];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Rouge1 => "rouge-1",
            Metric::Rouge2 => "rouge-2",
            Metric::RougeL => "rouge-l",
        }
    }
}

/// (overlap, candidate units, reference units) for one metric on token lists.
fn counts(metric: Metric, cand: &[String], reference: &[String]) -> (usize, usize, usize) {
    match metric {
        Metric::Rouge1 => ngram_counts(cand, reference, 1),
        Metric::Rouge2 => ngram_counts(cand, reference, 2),
        Metric::RougeL => (lcs_len(cand, reference), cand.len(), reference.len()),
    }
}

fn ngram_counts(cand: &[String], reference: &[String], n: usize) -> (usize, usize, usize) {
    if n == 0 || cand.len() < n || reference.len() < n {
        return (0, cand.len().saturating_sub(n.max(1) - 1), reference.len().saturating_sub(n.max(1) - 1));
    }
    let mut ref_grams: HashMap<&[String], usize> = HashMap::new();
    for g in reference.windows(n) {
        *ref_grams.entry(g).or_default() += 1;
    }
    let mut overlap = 0;
    for g in cand.windows(n) {
        if let Some(left) = ref_grams.get_mut(g) {
            if *left > 0 {
                *left -= 1;
                overlap += 1;
            }
        }
    }
    (overlap, cand.len() - n + 1, reference.len() - n + 1)
}

/// Longest common subsequence length, O(|a|·|b|) time, O(|b|) space.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-N over word tokens with clipped n-gram counts.
pub fn rouge_n(candidate: &str, reference: &str, n: usize) -> RougeScore {
    rouge_n_tokens(&tokenize_words(candidate), &tokenize_words(reference), n)
}

pub fn rouge_n_tokens(cand: &[String], reference: &[String], n: usize) -> RougeScore {
    let (o, c, r) = ngram_counts(cand, reference, n);
    RougeScore::from_counts(o, c, r)
}

/// ROUGE-L from the longest common subsequence of word tokens.
pub fn rouge_l(candidate: &str, reference: &str) -> RougeScore {
    rouge_l_tokens(&tokenize_words(candidate), &tokenize_words(reference))
}

pub fn rouge_l_tokens(cand: &[String], reference: &[String]) -> RougeScore {
    RougeScore::from_counts(lcs_len(cand, reference), cand.len(), reference.len())
}

pub fn score_metric(metric: Metric, candidate: &str, reference: &str) -> RougeScore {
    let (o, c, r) = counts(metric, &tokenize_words(candidate), &tokenize_words(reference));
    RougeScore::from_counts(o, c, r)
}

/// Best-F1 score against several references.
pub fn score_multi_reference(metric: Metric, candidate: &str, references: &[&str]) -> RougeScore {
    references
        .iter()
        .map(|r| score_metric(metric, candidate, r))
        .fold(RougeScore::default(), |best, s| if s.f1 > best.f1 { s } else { best })
}

/// How per-pair scores are combined over a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Unweighted mean of per-pair precision, recall and F1.
    #[default]
    PairMean,
    /// Sums overlap and unit counts over all pairs, then scores once.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub score: RougeScore,
}

impl MetricSummary {
    /// (precision, recall, f1) as percentages rounded to two decimals.
    pub fn percent(&self) -> (String, String, String) {
        let p = |x: f64| format!("{:.2}", x * 100.0);
        (p(self.score.precision), p(self.score.recall), p(self.score.f1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRouge {
    pub pairs: usize,
    pub aggregation: Aggregation,
    pub metrics: Vec<MetricSummary>,
}

impl CorpusRouge {
    pub fn get(&self, metric: Metric) -> RougeScore {
        self.metrics.iter().find(|m| m.metric == metric).map(|m| m.score).unwrap_or_default()
    }

    /// F1 as a percentage string with two decimals.
    pub fn f1_percent(&self, metric: Metric) -> String {
        format!("{:.2}", self.get(metric).f1 * 100.0)
    }
}

/// ROUGE-1, ROUGE-2 and ROUGE-L over (candidate, reference) pairs.
pub fn corpus_rouge<S: AsRef<str>>(pairs: &[(S, S)], aggregation: Aggregation) -> Result<CorpusRouge, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyEvaluationSet);
    }
    let tokenized: Vec<(Vec<String>, Vec<String>)> = pairs
        .iter()
        .map(|(c, r)| (tokenize_words(c.as_ref()), tokenize_words(r.as_ref())))
        .collect();
    let metrics = Metric::ALL
        .iter()
        .map(|&metric| {
            let score = match aggregation {
                Aggregation::PairMean => {
                    let n = tokenized.len() as f64;
                    let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
                    for (c, rf) in &tokenized {
                        let (o, cu, ru) = counts(metric, c, rf);
                        let s = RougeScore::from_counts(o, cu, ru);
                        p += s.precision;
                        r += s.recall;
                        f += s.f1;
                    }
                    RougeScore { precision: p / n, recall: r / n, f1: f / n }
                }
                Aggregation::Pooled => {
                    let (mut o, mut cu, mut ru) = (0, 0, 0);
                    for (c, rf) in &tokenized {
                        let (a, b, d) = counts(metric, c, rf);
                        o += a;
                        cu += b;
                        ru += d;
                    }
                    RougeScore::from_counts(o, cu, ru)
                }
            };
            MetricSummary { metric, score }
        })
        .collect();
    Ok(CorpusRouge { pairs: pairs.len(), aggregation, metrics })
}
