//! Educator sessions, their on-disk store, the pipeline operations that move
//! a session from inputs to a puzzle, and the HTTP service exposing them.
//!
//! A session moves forward only: `draft` → `clues_ready` → `generated`.

mod config;
pub mod http;
mod pipeline;
mod session;
mod store;

pub use config::{Limits, ServiceConfig, DATA_DIR_ENV};
pub use pipeline::{
    build_puzzle, create_session, first_clue_per_answer, get_session, prepare_generation, request_clues,
    run_generation, select_and_generate, PreparedGeneration,
};
pub use session::{
    candidate_id, CandidateEntry, GenerationSummary, InputFailure, Job, JobState, Session, SessionStatus,
};
pub use store::{SessionLock, SessionStore};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clueforge::ClueError;
use crate::evalkit::EvalError;
use crate::gridengine::GridError;

#[derive(Debug, Error)]
pub enum InterfaceError {
    #[error("session {0} not found")]
    SessionNotFound(String),
    #[error("{message}")]
    ValidationFailed { message: String, details: Vec<String> },
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    InvalidState(String),
    #[error("unknown candidate {0}")]
    UnknownCandidate(String),
    #[error("every input failed to produce clues")]
    AllProvidersFailed(Vec<InputFailure>),
    #[error("session has no puzzle yet")]
    PuzzleNotReady,
    #[error("storage error: {0}")]
    Storage(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Clue(#[from] ClueError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// JSON error body: `{code, message, details}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default)]
    pub details: Vec<String>,
}

impl InterfaceError {
    pub fn validation(message: impl Into<String>, details: Vec<String>) -> Self {
        InterfaceError::ValidationFailed { message: message.into(), details }
    }

    /// Stable code string, named after the underlying error variant.
    pub fn code(&self) -> &'static str {
        match self {
            InterfaceError::SessionNotFound(_) => "SessionNotFound",
            InterfaceError::ValidationFailed { .. } => "ValidationFailed",
            InterfaceError::Conflict(_) => "Conflict",
            InterfaceError::InvalidState(_) => "InvalidState",
            InterfaceError::UnknownCandidate(_) => "UnknownCandidate",
            InterfaceError::AllProvidersFailed(_) => "AllProvidersFailed",
            InterfaceError::PuzzleNotReady => "PuzzleNotReady",
            InterfaceError::Storage(_) => "StorageError",
            InterfaceError::Grid(g) => match g {
                GridError::NoWordFits => "NoWordFits",
                GridError::EmptyWordList => "EmptyWordList",
                GridError::InvalidConfig(_) => "InvalidConfig",
                GridError::MissingClue(_) => "MissingClue",
                GridError::IllegalPlacement { .. } => "IllegalPlacement",
                GridError::WordNotPresent(_) => "WordNotPresent",
            },
            InterfaceError::Clue(c) => c.code(),
            InterfaceError::Eval(e) => match e {
                EvalError::EmptyEvaluationSet => "EmptyEvaluationSet",
                _ => "EvalInputError",
            },
        }
    }

    pub fn body(&self) -> ErrorBody {
        let details = match self {
            InterfaceError::ValidationFailed { details, .. } => details.clone(),
            InterfaceError::AllProvidersFailed(fs) => {
                fs.iter().map(|f| format!("inputs[{}] {}: {}", f.input, f.answer, f.message)).collect()
            }
            _ => Vec::new(),
        };
        ErrorBody { code: self.code().to_string(), message: self.to_string(), details }
    }

    /// CLI exit code: 1 validation, 2 provider, 3 generation.
    pub fn exit_code(&self) -> i32 {
        match self {
            InterfaceError::AllProvidersFailed(_) => 2,
            InterfaceError::Clue(ClueError::ProviderUnavailable { .. } | ClueError::NoCluesFound(_)) => 2,
            InterfaceError::Grid(GridError::InvalidConfig(_)) => 1,
            InterfaceError::Grid(_) => 3,
            _ => 1,
        }
    }
}
