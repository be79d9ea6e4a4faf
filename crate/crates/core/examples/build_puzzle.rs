//! Generate a crossword from the sample corpus and print it.

use std::path::PathBuf;

use karekurucu::corpus::read_pairs_file;
use karekurucu::gridengine::GenConfig;
use karekurucu::interface::build_puzzle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/samples/pairs.tsv");
    let pairs = read_pairs_file(&path)?.pairs;
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let cfg = GenConfig { width: 11, height: 11, seed, workers: 2, ..Default::default() };
    let (doc, run) = build_puzzle(&pairs, &cfg)?;
    println!("{}", doc.render_text(true));
    println!(
        "{} words, {} crossings, fill {:.2}, score {:.4}, {:?} after {} adjustments",
        run.score.words, run.score.crossings, run.score.fill_ratio, run.score.score, run.reason, run.adjustments
    );
    Ok(())
}
