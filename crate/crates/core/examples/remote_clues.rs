//! The chat-model provider driven by offline transports: fixture files and
//! a scripted transport that fails twice before answering.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use karekurucu::clueforge::{
    generate, ClueProvider, ClueRequest, GenerateOptions, MockTransport, RemoteProvider, RetryPolicy,
    ScriptedTransport, TransportError,
};
use karekurucu::textnorm::to_grid_form;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixtures");
    let mock = RemoteProvider::new("mock", Box::new(MockTransport::new(fixtures)), "mock");
    let req = ClueRequest::for_text(
        "Fotosentez, bitkilerin ışık enerjisini kullanarak besin ürettiği süreçtir.",
        to_grid_form("fotosentez")?,
        Some("Biyoloji".into()),
        3,
    );
    println!("prompt:\n{}\n", mock.build_request(&req)?.messages[1].content);
    for c in generate(&req, &mock, GenerateOptions::default())? {
        println!("{}: {}", c.answer, c.clue);
    }

    let flaky = Arc::new(ScriptedTransport::new([
        Err(TransportError::Timeout),
        Err(TransportError::Status(503, "busy".into())),
        Ok("1. Yazı yazmaya yarayan araç\n2. Kalem\n3. Okul çantasındaki gereç".into()),
    ]));
    let retry = RetryPolicy { max_retries: 3, base_delay: Duration::from_millis(20), max_delay: Duration::from_millis(100) };
    let provider = RemoteProvider::new("flaky", Box::new(flaky.clone()), "demo").with_retry(retry);
    let raw = provider.propose(&ClueRequest::for_answer(to_grid_form("kalem")?, 3))?;
    println!("\n{} attempts, raw clues: {raw:?}", flaky.attempts());
    Ok(())
}
