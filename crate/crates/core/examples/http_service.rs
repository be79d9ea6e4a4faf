//! Start the service on a free port, drive one session over HTTP and shut
//! down.

use std::path::PathBuf;
use std::sync::Arc;

use karekurucu::clueforge::{MockTransport, RemoteProvider};
use karekurucu::interface::http::{router, AppState};
use karekurucu::interface::{ServiceConfig, SessionStore};
use serde_json::{json, Value};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir()?;
    let mut cfg = ServiceConfig::default();
    cfg.generation.width = 9;
    cfg.generation.height = 9;
    let provider = RemoteProvider::new("mock", Box::new(MockTransport::new(root.join("data/fixtures"))), "mock");
    let app = router(AppState::new(SessionStore::open(dir.path())?, Arc::new(provider), cfg));

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let base = format!("http://{}", listener.local_addr()?);
    tokio::spawn(async move { axum::serve(listener, app).await });

    let text = tokio::task::spawn_blocking(move || -> Result<String, ureq::Error> {
        let created: Value = ureq::post(&format!("{base}/sessions"))
            .send_json(json!({"inputs": [{"answer": "kalem"}, {"answer": "masa"}, {"answer": "ankara"}]}))?
            .into_json()?;
        let id = created["id"].as_str().unwrap_or_default().to_string();
        let with_clues: Value = ureq::post(&format!("{base}/sessions/{id}/clues")).call()?.into_json()?;
        println!("{} candidates", with_clues["candidates"].as_array().map_or(0, Vec::len));
        ureq::post(&format!("{base}/sessions/{id}/puzzle")).send_json(json!({"selections": ["c0-0", "c1-0", "c2-0"]}))?;
        Ok(ureq::get(&format!("{base}/sessions/{id}/puzzle.txt?solved=true")).call()?.into_string()?)
    })
    .await??;
    println!("{text}");
    Ok(())
}
