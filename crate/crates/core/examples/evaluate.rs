//! ROUGE scores and acceptability rates from the sample files.

use std::fs::File;
use std::path::PathBuf;

use karekurucu::evalkit::{acceptability_rate, corpus_rouge, read_ratings, read_rouge_pairs, Aggregation, Metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/samples");
    let pairs = read_rouge_pairs(File::open(data.join("rouge.tsv"))?)?;
    for agg in [Aggregation::PairMean, Aggregation::Pooled] {
        let rep = corpus_rouge(&pairs, agg)?;
        let row: Vec<String> = Metric::ALL.iter().map(|m| format!("{} {}", m.name(), rep.f1_percent(*m))).collect();
        println!("{agg:?}: {}", row.join(", "));
    }
    let rep = acceptability_rate(&read_ratings(File::open(data.join("ratings.tsv"))?)?)?;
    for row in rep.per_model.iter().chain([&rep.overall]) {
        println!("{:<10} {:>4}/{:<4} {}", row.model_id, row.accepted, row.total, row.display());
    }
    Ok(())
}
