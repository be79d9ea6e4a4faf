//! Clues looked up in an answer/clue corpus.

use std::path::PathBuf;

use karekurucu::clueforge::{generate_from_answer, GenerateOptions, StaticProvider};
use karekurucu::corpus::read_pairs_file;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/samples/pairs.tsv");
    let corpus = read_pairs_file(&path)?;
    let provider = StaticProvider::from_pairs("static", &corpus.pairs);
    for answer in provider.answers().take(5) {
        let clues = generate_from_answer(answer, 3, &provider, GenerateOptions::default())?;
        for c in clues {
            println!("{answer}: {}", c.clue);
        }
    }
    Ok(())
}
