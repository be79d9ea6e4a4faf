//! Ingest a messy answer/clue file, apply the filter chain and print
//! length statistics.

use std::fs::File;
use std::path::PathBuf;

use karekurucu::corpus::{answer_length_histogram, filter_pairs, ingest_pairs, read_records, filter_records, FilterConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/samples");
    let cfg = FilterConfig::default();

    let ingested = ingest_pairs(File::open(data.join("raw_pairs.tsv"))?, "example")?;
    let (kept, report, rejected) = filter_pairs(&ingested.pairs, &cfg);
    let total = ingested.report.clone().then(&report);
    println!("{}", serde_json::to_string_pretty(&total)?);
    for row in ingested.rejected.iter().chain(&rejected) {
        println!("rejected [{}]: {}", row.rule.as_str(), row.fields.join(" | "));
    }
    for (len, counts) in answer_length_histogram(&kept) {
        println!("length {len:>2}: {} pairs", counts.pairs);
    }

    let records = read_records(File::open(data.join("records.tsv"))?)?;
    let texts = filter_records(&records.records, &cfg);
    println!("texts kept {} of {}", texts.records.len(), texts.report.input_count);
    Ok(())
}
