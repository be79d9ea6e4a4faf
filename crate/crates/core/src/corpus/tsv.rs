//! UTF-8 tab-separated corpus files with a header row. Fields are not quoted;
//! tabs and newlines inside values are replaced by spaces on write.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::filter::{filter_keyword, filter_text_record, FilterConfig, KeywordVerdict, RejectRule};
use super::{AnswerCluePair, CorpusError, FilterReport, TextRecord};
use crate::textnorm::{to_upper_tr, NormalizedWord};

pub const PAIR_COLUMNS: [&str; 3] = ["answer", "clue", "source"];
pub const RECORD_COLUMNS: [&str; 7] =
    ["title", "text", "keyword", "category", "views", "relevance", "url"];

/// A rejected input row, kept verbatim for the sidecar file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedRow {
    pub fields: Vec<String>,
    pub rule: RejectRule,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOutcome {
    pub pairs: Vec<AnswerCluePair>,
    pub report: FilterReport,
    pub rejected: Vec<RejectedRow>,
    /// Header of the source, used when writing the sidecar.
    pub header: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RecordOutcome {
    pub records: Vec<TextRecord>,
    pub report: FilterReport,
    pub rejected: Vec<RejectedRow>,
    pub header: Vec<String>,
}

/// `<input>.rejected.tsv` next to the input file.
pub fn rejected_sidecar_path(input: &Path) -> PathBuf {
    let mut name = input.as_os_str().to_owned();
    name.push(".rejected.tsv");
    PathBuf::from(name)
}

fn tsv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .has_headers(true)
        .from_reader(reader)
}

fn tsv_writer<W: Write>(writer: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .delimiter(b'\t')
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(writer)
}

fn clean(field: &str) -> String {
    field.replace(['\t', '\n', '\r'], " ")
}

fn unreadable(e: csv::Error) -> CorpusError {
    CorpusError::UnreadableSource(e.to_string())
}

fn header_of<R: Read>(rdr: &mut csv::Reader<R>) -> Result<Vec<String>, CorpusError> {
    Ok(rdr.headers().map_err(unreadable)?.iter().map(|h| h.trim().to_string()).collect())
}

fn column(header: &[String], name: &'static str) -> Option<usize> {
    header.iter().position(|h| h == name)
}

/// Reads answer/clue rows, normalizes answers, drops exact duplicate pairs.
/// Bad rows are counted and returned, not fatal. Length bounds are not
/// applied here; see [`filter_pairs`].
pub fn ingest_pairs<R: Read>(reader: R, default_source: &str) -> Result<IngestOutcome, CorpusError> {
    let mut rdr = tsv_reader(reader);
    let header = header_of(&mut rdr)?;
    let answer_col = column(&header, "answer").ok_or(CorpusError::MissingColumn("answer"))?;
    let clue_col = column(&header, "clue").ok_or(CorpusError::MissingColumn("clue"))?;
    let source_col = column(&header, "source");

    let mut out = IngestOutcome { header, ..IngestOutcome::default() };
    let mut seen: HashSet<(NormalizedWord, String)> = HashSet::new();
    for row in rdr.records() {
        let row = row.map_err(unreadable)?;
        let fields: Vec<String> = row.iter().map(str::to_string).collect();
        let mut reject = |rule: RejectRule, fields: Vec<String>| {
            out.report.reject(rule);
            out.rejected.push(RejectedRow { fields, rule });
        };
        let (Some(raw_answer), Some(raw_clue)) = (row.get(answer_col), row.get(clue_col)) else {
            reject(RejectRule::Malformed, fields);
            continue;
        };
        let answer = match crate::textnorm::to_grid_form_joined(raw_answer.trim()) {
            Ok(a) => a,
            Err(crate::textnorm::NormError::Empty) => {
                reject(RejectRule::Empty, fields);
                continue;
            }
            Err(_) => {
                reject(RejectRule::NonAlphabet, fields);
                continue;
            }
        };
        let clue = raw_clue.trim();
        if clue.is_empty() {
            reject(RejectRule::EmptyClue, fields);
            continue;
        }
        if to_upper_tr(clue) == answer.as_str() {
            reject(RejectRule::ClueEqualsAnswer, fields);
            continue;
        }
        if !seen.insert((answer.clone(), clue.to_string())) {
            reject(RejectRule::Duplicate, fields);
            continue;
        }
        let source = source_col
            .and_then(|c| row.get(c))
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .unwrap_or(default_source);
        out.report.accept();
        out.pairs.push(AnswerCluePair {
            answer,
            clue: clue.to_string(),
            source: source.to_string(),
        });
    }
    Ok(out)
}

pub fn read_pairs_file(path: &Path) -> Result<IngestOutcome, CorpusError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CorpusError::UnreadableSource(format!("{}: {e}", path.display())))?;
    let tag = path.file_stem().and_then(|s| s.to_str()).unwrap_or("corpus");
    ingest_pairs(file, tag)
}

/// Applies the keyword filter to already-ingested pairs.
pub fn filter_pairs(pairs: &[AnswerCluePair], cfg: &FilterConfig) -> (Vec<AnswerCluePair>, FilterReport, Vec<RejectedRow>) {
    let verdicts: Vec<KeywordVerdict> =
        pairs.par_iter().map(|p| filter_keyword(p.answer.as_str(), cfg)).collect();
    let mut kept = Vec::new();
    let mut report = FilterReport::default();
    let mut rejected = Vec::new();
    for (pair, verdict) in pairs.iter().zip(verdicts) {
        match verdict {
            KeywordVerdict::Accept(_) => {
                report.accept();
                kept.push(pair.clone());
            }
            KeywordVerdict::Reject(rule) => {
                report.reject(rule);
                rejected.push(RejectedRow {
                    fields: vec![pair.answer.to_string(), pair.clue.clone(), pair.source.clone()],
                    rule,
                });
            }
        }
    }
    (kept, report, rejected)
}

/// Reads text records. Rows with missing columns or unparsable numbers are
/// rejected as malformed.
pub fn read_records<R: Read>(reader: R) -> Result<RecordOutcome, CorpusError> {
    let mut rdr = tsv_reader(reader);
    let header = header_of(&mut rdr)?;
    let mut cols = [0usize; 7];
    for (slot, name) in cols.iter_mut().zip(RECORD_COLUMNS) {
        *slot = column(&header, name).ok_or(CorpusError::MissingColumn(name))?;
    }
    let mut out = RecordOutcome { header, ..RecordOutcome::default() };
    for row in rdr.records() {
        let row = row.map_err(unreadable)?;
        let get = |i: usize| row.get(cols[i]).map(str::trim);
        let parsed = (|| {
            Some(TextRecord {
                title: get(0)?.to_string(),
                text: get(1)?.to_string(),
                keyword: get(2)?.to_string(),
                category: get(3)?.to_string(),
                views: get(4)?.parse().ok()?,
                relevance: get(5)?.parse::<f64>().ok().filter(|r| r.is_finite())?,
                url: get(6)?.to_string(),
            })
        })();
        match parsed {
            Some(rec) if !rec.text.is_empty() => {
                out.report.accept();
                out.records.push(rec);
            }
            Some(_) => {
                out.report.reject(RejectRule::Empty);
                out.rejected.push(RejectedRow { fields: row.iter().map(str::to_string).collect(), rule: RejectRule::Empty });
            }
            None => {
                out.report.reject(RejectRule::Malformed);
                out.rejected.push(RejectedRow { fields: row.iter().map(str::to_string).collect(), rule: RejectRule::Malformed });
            }
        }
    }
    Ok(out)
}

/// Runs [`filter_text_record`] over `records`, concurrently, keeping input
/// order in the output.
pub fn filter_records(records: &[TextRecord], cfg: &FilterConfig) -> RecordOutcome {
    let verdicts: Vec<Result<NormalizedWord, RejectRule>> =
        records.par_iter().map(|r| filter_text_record(r, cfg)).collect();
    let mut out = RecordOutcome {
        header: RECORD_COLUMNS.iter().map(|s| s.to_string()).collect(),
        ..RecordOutcome::default()
    };
    for (rec, verdict) in records.iter().zip(verdicts) {
        match verdict {
            Ok(_) => {
                out.report.accept();
                out.records.push(rec.clone());
            }
            Err(rule) => {
                out.report.reject(rule);
                out.rejected.push(RejectedRow { fields: record_fields(rec), rule });
            }
        }
    }
    out
}

fn record_fields(rec: &TextRecord) -> Vec<String> {
    vec![
        rec.title.clone(),
        rec.text.clone(),
        rec.keyword.clone(),
        rec.category.clone(),
        rec.views.to_string(),
        rec.relevance.to_string(),
        rec.url.clone(),
    ]
}

fn write_err(e: impl std::fmt::Display) -> CorpusError {
    CorpusError::Write(e.to_string())
}

pub fn write_pairs<W: Write>(writer: W, pairs: &[AnswerCluePair]) -> Result<(), CorpusError> {
    let mut w = tsv_writer(writer);
    w.write_record(PAIR_COLUMNS).map_err(write_err)?;
    for p in pairs {
        w.write_record([p.answer.as_str(), &clean(&p.clue), &clean(&p.source)]).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

pub fn write_records<W: Write>(writer: W, records: &[TextRecord]) -> Result<(), CorpusError> {
    let mut w = tsv_writer(writer);
    w.write_record(RECORD_COLUMNS).map_err(write_err)?;
    for r in records {
        let fields: Vec<String> = record_fields(r).iter().map(|f| clean(f)).collect();
        w.write_record(&fields).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}

/// Sidecar format: the source header plus a trailing `rule` column.
pub fn write_rejected<W: Write>(writer: W, header: &[String], rows: &[RejectedRow]) -> Result<(), CorpusError> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .quote_style(csv::QuoteStyle::Never)
        .flexible(true)
        .from_writer(writer);
    let mut head: Vec<String> = header.to_vec();
    head.push("rule".into());
    w.write_record(&head).map_err(write_err)?;
    for row in rows {
        let mut fields: Vec<String> = row.fields.iter().map(|f| clean(f)).collect();
        fields.push(row.rule.as_str().to_string());
        w.write_record(&fields).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}
