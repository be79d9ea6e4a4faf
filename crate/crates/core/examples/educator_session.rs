//! A teacher session from inputs to puzzle, stored on disk.

use std::path::PathBuf;

use karekurucu::clueforge::{ClueRequest, GenerateOptions, MockTransport, RemoteProvider};
use karekurucu::gridengine::GenConfig;
use karekurucu::interface::{create_session, request_clues, select_and_generate, SessionStore};
use karekurucu::textnorm::to_grid_form;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir()?;
    let store = SessionStore::open(dir.path())?;
    let provider = RemoteProvider::new("mock", Box::new(MockTransport::new(root.join("data/fixtures"))), "mock");

    let inputs = vec![
        ClueRequest::for_answer(to_grid_form("kalem")?, 3),
        ClueRequest::for_answer(to_grid_form("masa")?, 3),
        ClueRequest::for_text("Ankara, Türkiye'nin başkentidir.", to_grid_form("ankara")?, None, 3),
        ClueRequest::for_answer(to_grid_form("zeytin")?, 3),
    ];
    let s = create_session(&store, inputs, 100)?;
    println!("session {} is {:?}", s.id, s.status);
    let s = request_clues(&store, &s.id, &provider, GenerateOptions::default())?;
    for c in &s.candidates {
        println!("  {:<5} {}: {}", c.id, c.candidate.answer, c.candidate.clue);
    }
    for f in &s.failures {
        println!("  failed {}: {}", f.answer, f.message);
    }
    let picks = ["c0-0", "c1-1", "c2-2"].map(String::from);
    let s = select_and_generate(&store, &s.id, &picks, &GenConfig { width: 9, height: 9, ..Default::default() })?;
    println!("{}", s.puzzle.as_ref().expect("generated").render_text(false));
    println!("stored at {}", store.dir().join(format!("{}.json", s.id)).display());
    Ok(())
}
