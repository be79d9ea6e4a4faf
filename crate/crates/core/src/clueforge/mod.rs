//! Clue candidates for an answer, optionally grounded in a source text.
//!
//! A [`ClueProvider`] proposes raw clue strings; [`generate_from_answer`] and
//! [`generate_from_text`] validate, deduplicate and truncate them into
//! [`ClueCandidate`]s. Two providers ship: [`StaticProvider`] looks clues up
//! in an answer/clue corpus, [`RemoteProvider`] asks a chat model through a
//! pluggable [`Transport`].

mod parse;
mod prompt;
mod remote;

pub use parse::parse_clue_list;
pub use prompt::{render_prompt, PromptTemplate, TemplateSet, PLACEHOLDERS};
pub use remote::{
    ChatMessage, ChatRequest, HttpTransport, MockTransport, RateLimiter, RemoteProvider, RetryPolicy,
    ScriptedTransport, Transport, TransportError,
};

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::AnswerCluePair;
use crate::textnorm::{contains_word, letter_skeleton, to_lower_tr, word_count, NormalizedWord};

pub const DEFAULT_CLUE_COUNT: usize = 3;
pub const API_KEY_ENV: &str = "CLUEFORGE_API_KEY";
pub const MIN_CLUE_WORDS: usize = 5;
pub const MAX_CLUE_WORDS: usize = 15;

#[derive(Debug, Error)]
pub enum ClueError {
    #[error("request lacks field {{{0}}} used by the template")]
    MissingField(&'static str),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("provider {provider} unavailable after {attempts} attempt(s): {message}")]
    ProviderUnavailable { provider: String, attempts: u32, message: String },
    #[error("no clues found for {0}")]
    NoCluesFound(String),
    #[error("answer {0} does not appear in the text")]
    AnswerNotInText(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid provider config: {0}")]
    InvalidConfig(String),
}

impl ClueError {
    pub fn code(&self) -> &'static str {
        match self {
            ClueError::MissingField(_) => "MissingField",
            ClueError::InvalidTemplate(_) => "InvalidTemplate",
            ClueError::ProviderUnavailable { .. } => "ProviderUnavailable",
            ClueError::NoCluesFound(_) => "NoCluesFound",
            ClueError::AnswerNotInText(_) => "AnswerNotInText",
            ClueError::InvalidRequest(_) => "InvalidRequest",
            ClueError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

fn default_n() -> usize {
    DEFAULT_CLUE_COUNT
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClueRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub answer: NormalizedWord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default = "default_n")]
    pub n: usize,
}

impl ClueRequest {
    pub fn for_answer(answer: NormalizedWord, n: usize) -> Self {
        Self { text: None, answer, category: None, n }
    }

    pub fn for_text(text: impl Into<String>, answer: NormalizedWord, category: Option<String>, n: usize) -> Self {
        Self { text: Some(text.into()), answer, category, n }
    }

    pub fn validate(&self) -> Result<(), ClueError> {
        if self.n == 0 {
            return Err(ClueError::InvalidRequest("n must be at least 1".into()));
        }
        if let Some(t) = &self.text {
            if word_count(t) == 0 {
                return Err(ClueError::InvalidRequest("text has no words".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rating {
    pub accepted: bool,
    pub rater: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClueCandidate {
    pub clue: String,
    pub answer: NormalizedWord,
    pub provider_id: String,
    pub created_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<Rating>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Error)]
#[serde(rename_all = "snake_case")]
pub enum ClueRejection {
    #[error("clue is empty")]
    Empty,
    #[error("clue contains the answer")]
    AnswerLeak,
    #[error("clue has {0} words, outside 5..=15")]
    LengthOutOfRange(usize),
}

/// Rejects empty clues and clues whose letters contain the answer. With
/// `strict`, clues outside 5 to 15 words are rejected too.
pub fn validate_clue(clue: &str, answer: &NormalizedWord, strict: bool) -> Result<(), ClueRejection> {
    let words = word_count(clue);
    if words == 0 || letter_skeleton(clue).trim().is_empty() {
        return Err(ClueRejection::Empty);
    }
    if contains_word(clue, answer) {
        return Err(ClueRejection::AnswerLeak);
    }
    if strict && !(MIN_CLUE_WORDS..=MAX_CLUE_WORDS).contains(&words) {
        return Err(ClueRejection::LengthOutOfRange(words));
    }
    Ok(())
}

/// Source of raw clue strings. Implementations are stateless per request.
pub trait ClueProvider: Send + Sync {
    fn id(&self) -> &str;
    fn propose(&self, req: &ClueRequest) -> Result<Vec<String>, ClueError>;
}

/// Corpus lookup: clues for an answer in corpus order.
#[derive(Debug, Clone, Default)]
pub struct StaticProvider {
    id: String,
    by_answer: BTreeMap<NormalizedWord, Vec<String>>,
}

impl StaticProvider {
    pub fn from_pairs(id: impl Into<String>, pairs: &[AnswerCluePair]) -> Self {
        let mut by_answer: BTreeMap<NormalizedWord, Vec<String>> = BTreeMap::new();
        for p in pairs {
            by_answer.entry(p.answer.clone()).or_default().push(p.clue.clone());
        }
        Self { id: id.into(), by_answer }
    }

    pub fn answers(&self) -> impl Iterator<Item = &NormalizedWord> {
        self.by_answer.keys()
    }
}

impl ClueProvider for StaticProvider {
    fn id(&self) -> &str {
        &self.id
    }

    fn propose(&self, req: &ClueRequest) -> Result<Vec<String>, ClueError> {
        self.by_answer
            .get(&req.answer)
            .cloned()
            .ok_or_else(|| ClueError::NoCluesFound(req.answer.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GenerateOptions {
    /// Enforce the 5 to 15 word clue length.
    pub strict_length: bool,
    /// Allow text requests whose answer does not occur in the text.
    pub allow_answer_absent: bool,
}

fn finish(
    raw: Vec<String>,
    req: &ClueRequest,
    provider: &dyn ClueProvider,
    opts: GenerateOptions,
) -> Result<Vec<ClueCandidate>, ClueError> {
    let now = Utc::now();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for clue in raw {
        let clue = clue.trim().to_string();
        if let Err(why) = validate_clue(&clue, &req.answer, opts.strict_length) {
            tracing::debug!(answer = %req.answer, %clue, %why, "dropped clue");
            continue;
        }
        if !seen.insert(to_lower_tr(&clue)) {
            continue;
        }
        out.push(ClueCandidate {
            clue,
            answer: req.answer.clone(),
            provider_id: provider.id().to_string(),
            created_at: now,
            rating: None,
        });
        if out.len() == req.n {
            break;
        }
    }
    if out.is_empty() {
        return Err(ClueError::NoCluesFound(req.answer.to_string()));
    }
    Ok(out)
}

/// Up to `n` validated clues for a bare answer.
pub fn generate_from_answer(
    answer: &NormalizedWord,
    n: usize,
    provider: &dyn ClueProvider,
    opts: GenerateOptions,
) -> Result<Vec<ClueCandidate>, ClueError> {
    let req = ClueRequest::for_answer(answer.clone(), n);
    req.validate()?;
    finish(provider.propose(&req)?, &req, provider, opts)
}

/// Up to `req.n` validated clues for an answer grounded in `req.text`.
pub fn generate_from_text(
    req: &ClueRequest,
    provider: &dyn ClueProvider,
    opts: GenerateOptions,
) -> Result<Vec<ClueCandidate>, ClueError> {
    req.validate()?;
    let text = req.text.as_deref().ok_or(ClueError::MissingField("text"))?;
    if !opts.allow_answer_absent && !contains_word(text, &req.answer) {
        return Err(ClueError::AnswerNotInText(req.answer.to_string()));
    }
    finish(provider.propose(req)?, req, provider, opts)
}

/// Dispatches on whether the request carries text.
pub fn generate(req: &ClueRequest, provider: &dyn ClueProvider, opts: GenerateOptions) -> Result<Vec<ClueCandidate>, ClueError> {
    match req.text {
        Some(_) => generate_from_text(req, provider, opts),
        None => generate_from_answer(&req.answer, req.n, provider, opts),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    Static,
    Remote,
    /// Remote protocol answered from a fixtures directory.
    Mock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: Option<String>,
    pub model_name: String,
    pub timeout_ms: u64,
    pub max_retries: u32,
    pub backoff_ms: u64,
    pub temperature: f64,
    /// Zero disables rate limiting.
    pub requests_per_minute: u32,
    /// Answer/clue TSV for the static provider.
    pub corpus: Option<PathBuf>,
    pub fixtures_dir: Option<PathBuf>,
    pub prompts_dir: Option<PathBuf>,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: None,
            model_name: "gpt-3.5-turbo".into(),
            timeout_ms: 30_000,
            max_retries: 3,
            backoff_ms: 500,
            temperature: 0.7,
            requests_per_minute: 60,
            corpus: None,
            fixtures_dir: None,
            prompts_dir: None,
        }
    }
}

impl ProviderConfig {
    pub fn validate(&self) -> Result<(), ClueError> {
        let bad = |m: &str| Err(ClueError::InvalidConfig(m.into()));
        if self.timeout_ms == 0 {
            return bad("timeout_ms must be positive");
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return bad("temperature must be within 0..=2");
        }
        match self.kind {
            ProviderKind::Remote if self.endpoint.as_deref().map_or(true, str::is_empty) => {
                bad("remote provider requires an endpoint")
            }
            ProviderKind::Static if self.corpus.is_none() => bad("static provider requires a corpus path"),
            ProviderKind::Mock if self.fixtures_dir.is_none() => bad("mock provider requires fixtures_dir"),
            _ => Ok(()),
        }
    }

    fn retry(&self) -> RetryPolicy {
        RetryPolicy {
            max_retries: self.max_retries,
            base_delay: Duration::from_millis(self.backoff_ms),
            max_delay: Duration::from_millis(self.backoff_ms.saturating_mul(16)),
        }
    }

    /// Builds the configured provider. The remote credential is read from
    /// `CLUEFORGE_API_KEY`.
    pub fn build(&self) -> Result<Box<dyn ClueProvider>, ClueError> {
        self.validate()?;
        let templates = match &self.prompts_dir {
            Some(d) => TemplateSet::load_dir(d)?,
            None => TemplateSet::default(),
        };
        match self.kind {
            ProviderKind::Static => {
                let path = self.corpus.as_ref().expect("validated");
                let outcome = crate::corpus::read_pairs_file(path)
                    .map_err(|e| ClueError::InvalidConfig(format!("corpus: {e}")))?;
                Ok(Box::new(StaticProvider::from_pairs(format!("static:{}", path.display()), &outcome.pairs)))
            }
            ProviderKind::Remote => {
                let key = std::env::var(API_KEY_ENV)
                    .ok()
                    .filter(|k| !k.is_empty())
                    .ok_or_else(|| ClueError::InvalidConfig(format!("{API_KEY_ENV} is not set")))?;
                let endpoint = self.endpoint.clone().expect("validated");
                let transport = HttpTransport::new(endpoint, key, Duration::from_millis(self.timeout_ms));
                Ok(Box::new(
                    RemoteProvider::new(format!("remote:{}", self.model_name), Box::new(transport), &self.model_name)
                        .with_templates(templates)
                        .with_retry(self.retry())
                        .with_temperature(self.temperature)
                        .with_rate_limit(self.requests_per_minute),
                ))
            }
            ProviderKind::Mock => {
                let dir = self.fixtures_dir.clone().expect("validated");
                Ok(Box::new(
                    RemoteProvider::new("mock", Box::new(MockTransport::new(dir)), &self.model_name)
                        .with_templates(templates)
                        .with_retry(self.retry())
                        .with_temperature(self.temperature),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::textnorm::to_grid_form;

    fn w(s: &str) -> NormalizedWord {
        to_grid_form(s).unwrap()
    }

    fn scripted(reply: &str) -> RemoteProvider {
        RemoteProvider::new("scripted", Box::new(ScriptedTransport::repeating(Ok(reply.to_string()))), "m")
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate_clue("Türkiye'nin başkenti", &w("ankara"), false), Ok(()));
        assert_eq!(validate_clue("Ankara Türkiye'nin başkentidir", &w("ankara"), false), Err(ClueRejection::AnswerLeak));
        assert_eq!(validate_clue("Ankara'nın plakası", &w("ankara"), false), Err(ClueRejection::AnswerLeak));
        let long = "bir iki üç dört beş altı yedi sekiz dokuz on on bir on iki on üç";
        assert_eq!(word_count(long), 16);
        assert_eq!(validate_clue(long, &w("kalem"), true), Err(ClueRejection::LengthOutOfRange(16)));
        assert_eq!(validate_clue(long, &w("kalem"), false), Ok(()));
        assert_eq!(validate_clue("  ...  ", &w("kalem"), false), Err(ClueRejection::Empty));
    }

    #[test]
    fn static_lookup() {
        let pairs = [AnswerCluePair::new(w("kalem"), "Yazı aracı", "t").unwrap()];
        let p = StaticProvider::from_pairs("static", &pairs);
        let got = generate_from_answer(&w("kalem"), 3, &p, GenerateOptions::default()).unwrap();
        assert_eq!(got.iter().map(|c| c.clue.as_str()).collect::<Vec<_>>(), ["Yazı aracı"]);
        assert_eq!(got[0].provider_id, "static");
        assert!(matches!(
            generate_from_answer(&w("zürafa"), 3, &p, GenerateOptions::default()),
            Err(ClueError::NoCluesFound(a)) if a == "ZÜRAFA"
        ));
    }

    #[test]
    fn static_keeps_corpus_order_and_truncates() {
        let pairs: Vec<_> = ["b ipucu", "a ipucu", "c ipucu", "d ipucu"]
            .iter()
            .map(|c| AnswerCluePair::new(w("ev"), *c, "t").unwrap())
            .collect();
        let p = StaticProvider::from_pairs("s", &pairs);
        let got = generate_from_answer(&w("ev"), 3, &p, GenerateOptions::default()).unwrap();
        assert_eq!(got.iter().map(|c| c.clue.as_str()).collect::<Vec<_>>(), ["b ipucu", "a ipucu", "c ipucu"]);
    }

    #[test]
    fn text_request_three_clues() {
        let p = scripted("1. Cumhuriyetin kurucusu olan devlet adamı\n2. Samsun'a 1919'da çıkan komutan\n3. Nutuk'un yazarı");
        let req = ClueRequest::for_text(
            "Mustafa Kemal Atatürk, Türkiye Cumhuriyeti'nin kurucusudur.",
            w("atatürk"),
            Some("Tarih".into()),
            3,
        );
        let got = generate_from_text(&req, &p, GenerateOptions::default()).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|c| c.provider_id == "scripted" && c.answer == w("atatürk")));
    }

    #[test]
    fn answer_not_in_text() {
        let p = scripted("1. bir ipucu");
        let req = ClueRequest::for_text("Kedi evde uyur.", w("ankara"), None, 3);
        assert!(matches!(generate_from_text(&req, &p, GenerateOptions::default()), Err(ClueError::AnswerNotInText(_))));
        let opts = GenerateOptions { allow_answer_absent: true, ..Default::default() };
        assert_eq!(generate_from_text(&req, &p, opts).unwrap().len(), 1);
    }

    #[test]
    fn leaking_clue_dropped() {
        let p = scripted("1. Başkent Ankara\n2. Anıtkabir'in şehri\n3. ankara'nın ilçesi değil, kendisi\n4. Türkiye'nin başkenti");
        let req = ClueRequest::for_text("Ankara başkenttir.", w("ankara"), None, 3);
        let got = generate_from_text(&req, &p, GenerateOptions::default()).unwrap();
        assert_eq!(got.iter().map(|c| c.clue.as_str()).collect::<Vec<_>>(), ["Anıtkabir'in şehri", "Türkiye'nin başkenti"]);
    }

    #[test]
    fn duplicates_collapse() {
        let p = scripted("1. Yazı aracı\n2. yazı aracı\n3. Okul gereci");
        let got = generate_from_answer(&w("kalem"), 3, &p, GenerateOptions::default()).unwrap();
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn request_validation() {
        let p = scripted("x");
        assert!(matches!(generate_from_answer(&w("kalem"), 0, &p, GenerateOptions::default()), Err(ClueError::InvalidRequest(_))));
        let req = ClueRequest::for_text(" ,. ", w("kalem"), None, 3);
        assert!(matches!(generate_from_text(&req, &p, GenerateOptions::default()), Err(ClueError::InvalidRequest(_))));
    }

    #[test]
    fn provider_failure_propagates() {
        let t = Arc::new(ScriptedTransport::repeating(Err(TransportError::Status(500, "x".into()))));
        let p = RemoteProvider::new("r", Box::new(t), "m").with_retry(RetryPolicy {
            max_retries: 1,
            base_delay: Duration::ZERO,
            max_delay: Duration::ZERO,
        });
        assert!(matches!(
            generate_from_answer(&w("kalem"), 3, &p, GenerateOptions::default()),
            Err(ClueError::ProviderUnavailable { attempts: 2, .. })
        ));
    }

    #[test]
    fn config_validation() {
        let mut c = ProviderConfig { kind: ProviderKind::Remote, ..Default::default() };
        assert!(c.validate().is_err());
        c.endpoint = Some("http://localhost:1/v1/chat/completions".into());
        assert!(c.validate().is_ok());
        c.timeout_ms = 0;
        assert!(c.validate().is_err());
        let parsed: ProviderConfig = toml::from_str("kind = \"mock\"\nfixtures_dir = \"data/fixtures\"").unwrap();
        assert_eq!(parsed.max_retries, 3);
        assert!(parsed.build().is_ok());
    }

    #[test]
    fn request_serde_defaults_n() {
        let r: ClueRequest = serde_json::from_str(r#"{"answer":"kalem"}"#).unwrap();
        assert_eq!((r.answer.as_str(), r.n), ("KALEM", 3));
        assert!(serde_json::from_str::<ClueRequest>(r#"{"answer":"covid-19"}"#).is_err());
    }
}
