use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::clueforge::{ClueCandidate, ClueRequest};
use crate::gridengine::{GenConfig, PuzzleDocument, ScoreBreakdown, TerminationReason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Draft,
    CluesReady,
    Generated,
}

/// A candidate with its stable id `c{input}-{k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub id: String,
    pub input: usize,
    #[serde(flatten)]
    pub candidate: ClueCandidate,
}

pub fn candidate_id(input: usize, k: usize) -> String {
    format!("c{input}-{k}")
}

/// An input for which no candidate could be produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFailure {
    pub input: usize,
    pub answer: String,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub reason: TerminationReason,
    pub score: ScoreBreakdown,
    pub adjustments: usize,
    pub elapsed_ms: u64,
    pub config: GenConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobState {
    Running,
    Failed,
}

/// Background grid generation progress, polled through the session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub state: JobState,
    pub started_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Job {
    pub fn is_running(&self) -> bool {
        self.state == JobState::Running
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub inputs: Vec<ClueRequest>,
    #[serde(default)]
    pub candidates: Vec<CandidateEntry>,
    /// Answer to chosen clue.
    #[serde(default)]
    pub selections: BTreeMap<String, String>,
    #[serde(default)]
    pub failures: Vec<InputFailure>,
    #[serde(default)]
    pub puzzle: Option<PuzzleDocument>,
    #[serde(default)]
    pub generation: Option<GenerationSummary>,
    pub status: SessionStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub job: Option<Job>,
}

impl Session {
    pub fn new(id: String, inputs: Vec<ClueRequest>) -> Self {
        Self {
            id,
            created_at: Utc::now(),
            inputs,
            candidates: Vec::new(),
            selections: BTreeMap::new(),
            failures: Vec::new(),
            puzzle: None,
            generation: None,
            status: SessionStatus::Draft,
            job: None,
        }
    }

    pub fn candidate(&self, id: &str) -> Option<&CandidateEntry> {
        self.candidates.iter().find(|c| c.id == id)
    }

    pub fn generation_running(&self) -> bool {
        self.job.as_ref().is_some_and(Job::is_running)
    }

    /// Describes the first broken invariant, if any.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.inputs.is_empty() {
            return Err("session has no inputs".into());
        }
        let mut ids = BTreeSet::new();
        for c in &self.candidates {
            if !ids.insert(c.id.as_str()) {
                return Err(format!("duplicate candidate id {}", c.id));
            }
            let Some(input) = self.inputs.get(c.input) else {
                return Err(format!("candidate {} refers to missing input {}", c.id, c.input));
            };
            if input.answer != c.candidate.answer {
                return Err(format!("candidate {} answer differs from its input", c.id));
            }
        }
        for (answer, clue) in &self.selections {
            if !self.candidates.iter().any(|c| c.candidate.answer.as_str() == answer && &c.candidate.clue == clue) {
                return Err(format!("selection for {answer} matches no candidate"));
            }
        }
        let ok = match self.status {
            SessionStatus::Draft => self.candidates.is_empty() && self.selections.is_empty() && self.puzzle.is_none(),
            SessionStatus::CluesReady => self.puzzle.is_none(),
            SessionStatus::Generated => self.puzzle.is_some() && !self.selections.is_empty(),
        };
        if !ok {
            return Err(format!("fields inconsistent with status {:?}", self.status));
        }
        if let Some(p) = &self.puzzle {
            for a in p.answers() {
                if !self.selections.contains_key(a) {
                    return Err(format!("puzzle answer {a} was not selected"));
                }
            }
        }
        Ok(())
    }
}
