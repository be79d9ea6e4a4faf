//! JSON-over-HTTP access to sessions and evaluation.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/sessions` | `{inputs: [ClueRequest]}` | 201 session |
//! | GET | `/sessions/{id}` | | session |
//! | POST | `/sessions/{id}/clues` | | session |
//! | POST | `/sessions/{id}/puzzle` | `{selections: [id], config?, background?}` | session (202 when `background`) |
//! | GET | `/sessions/{id}/puzzle.json` | | puzzle document |
//! | GET | `/sessions/{id}/puzzle.txt?solved=` | | text rendering |
//! | POST | `/eval/rouge` | `{pairs: [{candidate, reference}], aggregation?}` | scores |
//! | GET | `/health` | | `{status, version}` |
//!
//! Errors reply with `{code, message, details}`.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use super::{
    create_session, get_session, prepare_generation, request_clues, run_generation, ErrorBody, InterfaceError,
    ServiceConfig, Session, SessionStore,
};
use crate::clueforge::{ClueError, ClueProvider, ClueRequest};
use crate::evalkit::{corpus_rouge, Aggregation, CorpusRouge, EvalError};
use crate::gridengine::{GenConfig, GridError};

#[derive(Clone)]
pub struct AppState {
    pub store: SessionStore,
    pub provider: Arc<dyn ClueProvider>,
    pub config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(store: SessionStore, provider: Arc<dyn ClueProvider>, config: ServiceConfig) -> Self {
        Self { store, provider, config: Arc::new(config) }
    }

    /// Opens the store and builds the provider described by `config`.
    pub fn from_config(config: ServiceConfig) -> Result<Self, InterfaceError> {
        config.validate()?;
        let store = SessionStore::open(&config.data_dir)?;
        let provider: Arc<dyn ClueProvider> = Arc::from(config.provider.build()?);
        Ok(Self::new(store, provider, config))
    }
}

/// Error reply for the HTTP layer.
pub struct ApiError(StatusCode, ErrorBody);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

pub fn status_for(e: &InterfaceError) -> StatusCode {
    match e {
        InterfaceError::SessionNotFound(_) | InterfaceError::PuzzleNotReady => StatusCode::NOT_FOUND,
        InterfaceError::ValidationFailed { .. } | InterfaceError::UnknownCandidate(_) => StatusCode::BAD_REQUEST,
        InterfaceError::Conflict(_) | InterfaceError::InvalidState(_) => StatusCode::CONFLICT,
        InterfaceError::AllProvidersFailed(_) => StatusCode::BAD_GATEWAY,
        InterfaceError::Storage(_) => StatusCode::INTERNAL_SERVER_ERROR,
        InterfaceError::Grid(GridError::InvalidConfig(_)) => StatusCode::BAD_REQUEST,
        InterfaceError::Grid(GridError::NoWordFits | GridError::EmptyWordList) => StatusCode::UNPROCESSABLE_ENTITY,
        InterfaceError::Grid(_) => StatusCode::INTERNAL_SERVER_ERROR,
        InterfaceError::Clue(ClueError::ProviderUnavailable { .. }) => StatusCode::BAD_GATEWAY,
        InterfaceError::Clue(ClueError::NoCluesFound(_)) => StatusCode::UNPROCESSABLE_ENTITY,
        InterfaceError::Clue(ClueError::InvalidConfig(_) | ClueError::InvalidTemplate(_)) => {
            StatusCode::INTERNAL_SERVER_ERROR
        }
        InterfaceError::Clue(_) => StatusCode::BAD_REQUEST,
        InterfaceError::Eval(EvalError::Write(_)) => StatusCode::INTERNAL_SERVER_ERROR,
        InterfaceError::Eval(_) => StatusCode::BAD_REQUEST,
    }
}

impl From<InterfaceError> for ApiError {
    fn from(e: InterfaceError) -> Self {
        ApiError(status_for(&e), e.body())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        let status = r.status();
        let code = match status {
            StatusCode::PAYLOAD_TOO_LARGE => "PayloadTooLarge",
            StatusCode::UNSUPPORTED_MEDIA_TYPE => "UnsupportedMediaType",
            _ => "ValidationFailed",
        };
        let status = if status == StatusCode::UNPROCESSABLE_ENTITY { StatusCode::BAD_REQUEST } else { status };
        ApiError(status, ErrorBody { code: code.into(), message: "invalid request body".into(), details: vec![r.body_text()] })
    }
}

type ApiResult<T> = Result<T, ApiError>;

async fn blocking<T, F>(f: F) -> Result<T, InterfaceError>
where
    F: FnOnce() -> Result<T, InterfaceError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| InterfaceError::Storage(format!("worker failed: {e}")))?
}

#[derive(Debug, Deserialize)]
pub struct CreateBody {
    pub inputs: Vec<ClueRequest>,
}

#[derive(Debug, Deserialize)]
pub struct PuzzleBody {
    pub selections: Vec<String>,
    /// Overrides applied on top of the service's default generation config.
    #[serde(default)]
    pub config: Option<serde_json::Map<String, serde_json::Value>>,
    #[serde(default)]
    pub background: bool,
}

#[derive(Debug, Deserialize)]
pub struct RougePair {
    pub candidate: String,
    pub reference: String,
}

#[derive(Debug, Deserialize)]
pub struct RougeBody {
    pub pairs: Vec<RougePair>,
    #[serde(default)]
    pub aggregation: Aggregation,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RougeReply {
    #[serde(flatten)]
    pub scores: CorpusRouge,
    /// F1 per metric as a percentage with two decimals.
    pub f1_percent: std::collections::BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
pub struct TextQuery {
    #[serde(default)]
    pub solved: bool,
}

fn merged_config(base: &GenConfig, overrides: Option<serde_json::Map<String, serde_json::Value>>) -> Result<GenConfig, InterfaceError> {
    let Some(overrides) = overrides else {
        return Ok(base.clone());
    };
    let mut value = serde_json::to_value(base).expect("config serializes");
    let obj = value.as_object_mut().expect("config is an object");
    for (k, v) in overrides {
        if !obj.contains_key(&k) {
            return Err(InterfaceError::validation("unknown generation setting", vec![k]));
        }
        obj.insert(k, v);
    }
    serde_json::from_value(value).map_err(|e| InterfaceError::validation("invalid generation config", vec![e.to_string()]))
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({"status": "ok", "version": env!("CARGO_PKG_VERSION")}))
}

async fn create(State(st): State<AppState>, body: Result<Json<CreateBody>, JsonRejection>) -> ApiResult<(StatusCode, Json<Session>)> {
    let Json(body) = body?;
    let max = st.config.limits.max_inputs;
    let s = blocking(move || create_session(&st.store, body.inputs, max)).await?;
    Ok((StatusCode::CREATED, Json(s)))
}

async fn fetch(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Session>> {
    Ok(Json(blocking(move || get_session(&st.store, &id)).await?))
}

async fn clues(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Session>> {
    let opts = st.config.clues;
    Ok(Json(blocking(move || request_clues(&st.store, &id, st.provider.as_ref(), opts)).await?))
}

async fn puzzle(
    State(st): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<PuzzleBody>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Session>)> {
    let Json(body) = body?;
    let cfg = merged_config(&st.config.generation, body.config)?;
    let store = st.store.clone();
    let prepared = blocking(move || prepare_generation(&store, &id, &body.selections, &cfg)).await?;
    if body.background {
        let sid = prepared.session_id.clone();
        let store = st.store.clone();
        let s = blocking(move || get_session(&store, &sid)).await?;
        let store = st.store.clone();
        tokio::task::spawn_blocking(move || {
            let sid = prepared.session_id.clone();
            if let Err(e) = run_generation(&store, prepared) {
                tracing::warn!(session = %sid, error = %e, "background generation failed");
            }
        });
        return Ok((StatusCode::ACCEPTED, Json(s)));
    }
    let s = blocking(move || run_generation(&st.store, prepared)).await?;
    Ok((StatusCode::OK, Json(s)))
}

async fn puzzle_json(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let s = blocking(move || get_session(&st.store, &id)).await?;
    let doc = s.puzzle.ok_or(InterfaceError::PuzzleNotReady)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], doc.to_json()).into_response())
}

async fn puzzle_txt(State(st): State<AppState>, Path(id): Path<String>, Query(q): Query<TextQuery>) -> ApiResult<Response> {
    let s = blocking(move || get_session(&st.store, &id)).await?;
    let doc = s.puzzle.ok_or(InterfaceError::PuzzleNotReady)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], doc.render_text(q.solved)).into_response())
}

async fn rouge(body: Result<Json<RougeBody>, JsonRejection>) -> ApiResult<Json<RougeReply>> {
    let Json(body) = body?;
    let pairs: Vec<(String, String)> = body.pairs.into_iter().map(|p| (p.candidate, p.reference)).collect();
    let scores = corpus_rouge(&pairs, body.aggregation).map_err(InterfaceError::from)?;
    let f1_percent = scores.metrics.iter().map(|m| (m.metric.name().to_string(), m.percent().2)).collect();
    Ok(Json(RougeReply { scores, f1_percent }))
}

pub fn router(state: AppState) -> Router {
    let limit = state.config.limits.max_body_bytes;
    Router::new()
        .route("/health", get(health))
        .route("/sessions", post(create))
        .route("/sessions/:id", get(fetch))
        .route("/sessions/:id/clues", post(clues))
        .route("/sessions/:id/puzzle", post(puzzle))
        .route("/sessions/:id/puzzle.json", get(puzzle_json))
        .route("/sessions/:id/puzzle.txt", get(puzzle_txt))
        .route("/eval/rouge", post(rouge))
        .layer(DefaultBodyLimit::max(limit))
        .with_state(state)
}

/// Binds `config.listen` and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), InterfaceError> {
    let listen = config.listen.clone();
    let state = AppState::from_config(config)?;
    let listener = tokio::net::TcpListener::bind(&listen)
        .await
        .map_err(|e| InterfaceError::validation(format!("cannot bind {listen}: {e}"), vec![]))?;
    tracing::info!(%listen, data_dir = %state.store.dir().display(), "serving");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| InterfaceError::Storage(e.to_string()))
}
