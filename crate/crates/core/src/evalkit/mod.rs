//! Clue quality evaluation: ROUGE-1/2/L against reference clues and human
//! acceptability rates.
//!
//! Tokens come from [`crate::textnorm::tokenize_words`]; there is no
//! stemming. Inputs are TSV files, reports are CSV.

mod ratings;
mod rouge;

pub use ratings::{acceptability_rate, AcceptabilityReport, RateRow, RatingRecord, OVERALL_ID};
pub use rouge::{
    corpus_rouge, lcs_len, rouge_l, rouge_l_tokens, rouge_n, rouge_n_tokens, score_metric,
    score_multi_reference, Aggregation, CorpusRouge, Metric, MetricSummary, RougeScore,
};

use std::io::{Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("evaluation set is empty")]
    EmptyEvaluationSet,
    #[error("cannot read evaluation input: {0}")]
    Read(String),
    #[error("missing column {0:?}")]
    MissingColumn(&'static str),
    #[error("line {line}: {message}")]
    BadRow { line: u64, message: String },
    #[error("write failed: {0}")]
    Write(String),
}

fn tsv<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().delimiter(b'\t').quoting(false).flexible(true).from_reader(reader)
}

fn columns<R: Read>(rdr: &mut csv::Reader<R>, names: &[&'static str]) -> Result<Vec<usize>, EvalError> {
    let header = rdr.headers().map_err(|e| EvalError::Read(e.to_string()))?.clone();
    names
        .iter()
        .map(|&n| header.iter().position(|h| h.trim() == n).ok_or(EvalError::MissingColumn(n)))
        .collect()
}

/// `candidate`, `reference` columns.
pub fn read_rouge_pairs<R: Read>(reader: R) -> Result<Vec<(String, String)>, EvalError> {
    let mut rdr = tsv(reader);
    let cols = columns(&mut rdr, &["candidate", "reference"])?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| EvalError::Read(e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        match (row.get(cols[0]), row.get(cols[1])) {
            (Some(c), Some(r)) => out.push((c.to_string(), r.to_string())),
            _ => return Err(EvalError::BadRow { line, message: "expected candidate and reference".into() }),
        }
    }
    Ok(out)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_lowercase().as_str() {
        "1" | "true" | "yes" | "evet" | "accepted" => Some(true),
        "0" | "false" | "no" | "hayır" | "rejected" => Some(false),
        _ => None,
    }
}

/// `candidate_id`, `model_id`, `accepted`, `rater` columns.
pub fn read_ratings<R: Read>(reader: R) -> Result<Vec<RatingRecord>, EvalError> {
    let mut rdr = tsv(reader);
    let cols = columns(&mut rdr, &["candidate_id", "model_id", "accepted", "rater"])?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| EvalError::Read(e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let get = |i: usize| row.get(cols[i]).map(str::trim);
        let (Some(cid), Some(mid), Some(acc), Some(rater)) = (get(0), get(1), get(2), get(3)) else {
            return Err(EvalError::BadRow { line, message: "missing field".into() });
        };
        let accepted = parse_bool(acc)
            .ok_or_else(|| EvalError::BadRow { line, message: format!("bad accepted value {acc:?}") })?;
        out.push(RatingRecord {
            candidate_id: cid.to_string(),
            model_id: mid.to_string(),
            accepted,
            rater: rater.to_string(),
        });
    }
    Ok(out)
}

fn werr(e: impl std::fmt::Display) -> EvalError {
    EvalError::Write(e.to_string())
}

/// `metric,precision,recall,f1` with percentages to two decimals.
pub fn write_rouge_report<W: Write>(writer: W, report: &CorpusRouge) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["metric", "precision", "recall", "f1"]).map_err(werr)?;
    for m in &report.metrics {
        let (p, r, f) = m.percent();
        w.write_record([m.metric.name(), &p, &r, &f]).map_err(werr)?;
    }
    w.flush().map_err(werr)
}

/// `model_id,accepted,total,rate` with the rate as a percentage to 0.1.
pub fn write_ratings_report<W: Write>(writer: W, report: &AcceptabilityReport) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["model_id", "accepted", "total", "rate"]).map_err(werr)?;
    for row in report.per_model.iter().chain(std::iter::once(&report.overall)) {
        w.write_record([
            row.model_id.clone(),
            row.accepted.to_string(),
            row.total.to_string(),
            format!("{:.1}", row.rate() * 100.0),
        ])
        .map_err(werr)?;
    }
    w.flush().map_err(werr)
}
