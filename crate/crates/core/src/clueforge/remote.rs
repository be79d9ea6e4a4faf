use std::collections::VecDeque;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parse::parse_clue_list;
use super::prompt::{render_prompt, TemplateSet};
use super::{ClueError, ClueProvider, ClueRequest};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

/// Chat-completions request body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    /// Answer the request is about; not sent over the wire.
    #[serde(skip)]
    pub key: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("request timed out")]
    Timeout,
    #[error("HTTP {0}: {1}")]
    Status(u16, String),
    #[error("network error: {0}")]
    Network(String),
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("no fixture: {0}")]
    Fixture(String),
}

impl TransportError {
    pub fn is_retryable(&self) -> bool {
        match self {
            TransportError::Timeout | TransportError::Network(_) => true,
            TransportError::Status(code, _) => *code == 429 || *code >= 500,
            TransportError::Malformed(_) | TransportError::Fixture(_) => false,
        }
    }
}

/// Sends one chat request and returns the assistant message text.
pub trait Transport: Send + Sync {
    fn send(&self, req: &ChatRequest) -> Result<String, TransportError>;
}

/// OpenAI-compatible `/chat/completions` endpoint.
pub struct HttpTransport {
    endpoint: String,
    api_key: String,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(endpoint: impl Into<String>, api_key: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(timeout).build();
        Self { endpoint: endpoint.into(), api_key: api_key.into(), agent }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

impl Transport for HttpTransport {
    fn send(&self, req: &ChatRequest) -> Result<String, TransportError> {
        let resp = self
            .agent
            .post(&self.endpoint)
            .set("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(req);
        let resp = match resp {
            Ok(r) => r,
            Err(ureq::Error::Status(code, r)) => {
                return Err(TransportError::Status(code, r.into_string().unwrap_or_default()))
            }
            Err(ureq::Error::Transport(t)) => {
                let msg = t.to_string();
                return Err(if msg.contains("timed out") { TransportError::Timeout } else { TransportError::Network(msg) });
            }
        };
        let body: ChatResponse = resp.into_json().map_err(|e| TransportError::Malformed(e.to_string()))?;
        body.choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| TransportError::Malformed("no choices".into()))
    }
}

/// Offline transport: the reply for answer `X` is the file `<dir>/X.txt`.
pub struct MockTransport {
    dir: PathBuf,
}

impl MockTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }
}

impl Transport for MockTransport {
    fn send(&self, req: &ChatRequest) -> Result<String, TransportError> {
        let path = self.dir.join(format!("{}.txt", req.key));
        std::fs::read_to_string(&path).map_err(|e| TransportError::Fixture(format!("{}: {e}", path.display())))
    }
}

/// Replays a fixed sequence of replies and counts attempts.
pub struct ScriptedTransport {
    script: Mutex<VecDeque<Result<String, TransportError>>>,
    fallback: Option<Result<String, TransportError>>,
    attempts: AtomicUsize,
    seen: Mutex<Vec<ChatRequest>>,
}

impl ScriptedTransport {
    pub fn new(script: impl IntoIterator<Item = Result<String, TransportError>>) -> Self {
        Self {
            script: Mutex::new(script.into_iter().collect()),
            fallback: None,
            attempts: AtomicUsize::new(0),
            seen: Mutex::new(Vec::new()),
        }
    }

    /// Returns `reply` forever once the script runs out.
    pub fn repeating(reply: Result<String, TransportError>) -> Self {
        let mut t = Self::new([]);
        t.fallback = Some(reply);
        t
    }

    pub fn attempts(&self) -> usize {
        self.attempts.load(Ordering::SeqCst)
    }

    pub fn requests(&self) -> Vec<ChatRequest> {
        self.seen.lock().unwrap().clone()
    }
}

impl Transport for ScriptedTransport {
    fn send(&self, req: &ChatRequest) -> Result<String, TransportError> {
        self.attempts.fetch_add(1, Ordering::SeqCst);
        self.seen.lock().unwrap().push(req.clone());
        match self.script.lock().unwrap().pop_front() {
            Some(r) => r,
            None => self.fallback.clone().unwrap_or_else(|| Err(TransportError::Network("script exhausted".into()))),
        }
    }
}

impl<T: Transport + ?Sized> Transport for std::sync::Arc<T> {
    fn send(&self, req: &ChatRequest) -> Result<String, TransportError> {
        (**self).send(req)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0-based): base · 2^retry, capped.
    pub fn delay(&self, retry: u32) -> Duration {
        let factor = 1u32.checked_shl(retry.min(20)).unwrap_or(u32::MAX);
        self.base_delay.saturating_mul(factor).min(self.max_delay)
    }
}

/// Token bucket shared by all requests of one provider.
pub struct RateLimiter {
    capacity: f64,
    per_sec: f64,
    state: Mutex<(f64, Instant)>,
}

impl RateLimiter {
    /// `None` when `requests_per_minute` is zero (unlimited).
    pub fn per_minute(requests_per_minute: u32) -> Option<Self> {
        (requests_per_minute > 0).then(|| {
            let capacity = f64::from(requests_per_minute);
            Self { capacity, per_sec: capacity / 60.0, state: Mutex::new((capacity, Instant::now())) }
        })
    }

    /// Takes a token if one is available, otherwise reports how long to wait.
    pub fn try_acquire(&self) -> Result<(), Duration> {
        let mut st = self.state.lock().unwrap();
        let now = Instant::now();
        let refill = now.duration_since(st.1).as_secs_f64() * self.per_sec;
        st.0 = (st.0 + refill).min(self.capacity);
        st.1 = now;
        if st.0 >= 1.0 {
            st.0 -= 1.0;
            Ok(())
        } else {
            Err(Duration::from_secs_f64((1.0 - st.0) / self.per_sec))
        }
    }

    pub fn acquire(&self) {
        while let Err(wait) = self.try_acquire() {
            std::thread::sleep(wait);
        }
    }
}

/// Chat-model provider: renders the prompt, sends it with retries and parses
/// the reply into clues.
pub struct RemoteProvider {
    id: String,
    transport: Box<dyn Transport>,
    templates: TemplateSet,
    model: String,
    temperature: f64,
    retry: RetryPolicy,
    limiter: Option<RateLimiter>,
}

impl RemoteProvider {
    pub fn new(id: impl Into<String>, transport: Box<dyn Transport>, model: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            transport,
            templates: TemplateSet::default(),
            model: model.into(),
            temperature: 0.7,
            retry: RetryPolicy { max_retries: 3, base_delay: Duration::from_millis(500), max_delay: Duration::from_secs(8) },
            limiter: None,
        }
    }

    pub fn with_templates(mut self, templates: TemplateSet) -> Self {
        self.templates = templates;
        self
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_rate_limit(mut self, requests_per_minute: u32) -> Self {
        self.limiter = RateLimiter::per_minute(requests_per_minute);
        self
    }

    pub fn build_request(&self, req: &ClueRequest) -> Result<ChatRequest, ClueError> {
        let user = render_prompt(self.templates.select(req), req)?;
        Ok(ChatRequest {
            model: self.model.clone(),
            messages: vec![
                ChatMessage { role: "system".into(), content: self.templates.system.clone() },
                ChatMessage { role: "user".into(), content: user },
            ],
            temperature: self.temperature,
            key: req.answer.to_string(),
        })
    }
}

impl ClueProvider for RemoteProvider {
    fn id(&self) -> &str {
        &self.id
    }

    fn propose(&self, req: &ClueRequest) -> Result<Vec<String>, ClueError> {
        let chat = self.build_request(req)?;
        let mut attempt = 0u32;
        loop {
            if let Some(l) = &self.limiter {
                l.acquire();
            }
            attempt += 1;
            match self.transport.send(&chat) {
                Ok(reply) => return Ok(parse_clue_list(&reply)),
                Err(e) if e.is_retryable() && attempt <= self.retry.max_retries => {
                    tracing::warn!(provider = %self.id, attempt, error = %e, "retrying");
                    std::thread::sleep(self.retry.delay(attempt - 1));
                }
                Err(e) => {
                    return Err(ClueError::ProviderUnavailable {
                        provider: self.id.clone(),
                        attempts: attempt,
                        message: e.to_string(),
                    })
                }
            }
        }
    }
}
