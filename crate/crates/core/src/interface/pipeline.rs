use std::collections::{BTreeMap, HashSet};
use std::time::Duration;

use chrono::Utc;
use rayon::prelude::*;

use super::session::{candidate_id, CandidateEntry, GenerationSummary, InputFailure, Job, JobState, Session, SessionStatus};
use super::store::SessionStore;
use super::InterfaceError;
use crate::clueforge::{self, ClueProvider, ClueRequest, GenerateOptions};
use crate::corpus::AnswerCluePair;
use crate::gridengine::{number_and_render, GenConfig, Generation, Generator, PuzzleDocument};
use crate::textnorm::NormalizedWord;

/// How long a finishing background job waits for a busy session lock.
const JOB_LOCK_PATIENCE: Duration = Duration::from_secs(10);

/// Keeps the first clue per answer, in input order.
pub fn first_clue_per_answer(pairs: &[AnswerCluePair]) -> Vec<AnswerCluePair> {
    let mut seen = HashSet::new();
    pairs.iter().filter(|p| seen.insert(p.answer.clone())).cloned().collect()
}

/// Runs the generator and numbers the result. The CLI and the HTTP service
/// both go through here, so equal inputs give equal documents.
pub fn build_puzzle(pairs: &[AnswerCluePair], cfg: &GenConfig) -> Result<(PuzzleDocument, Generation), InterfaceError> {
    let pairs = first_clue_per_answer(pairs);
    let generation = Generator::new(cfg.clone()).run(&pairs)?;
    let clues: BTreeMap<NormalizedWord, String> = pairs.into_iter().map(|p| (p.answer, p.clue)).collect();
    let doc = number_and_render(&generation.layout, &clues)?;
    Ok((doc, generation))
}

pub fn create_session(store: &SessionStore, inputs: Vec<ClueRequest>, max_inputs: usize) -> Result<Session, InterfaceError> {
    if inputs.is_empty() {
        return Err(InterfaceError::validation("at least one input is required", vec![]));
    }
    if inputs.len() > max_inputs {
        return Err(InterfaceError::validation(format!("at most {max_inputs} inputs are allowed"), vec![]));
    }
    let details: Vec<String> = inputs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.validate().err().map(|e| format!("inputs[{i}]: {e}")))
        .collect();
    if !details.is_empty() {
        return Err(InterfaceError::validation("invalid inputs", details));
    }
    let session = Session::new(store.new_id(), inputs);
    let lock = store.try_lock(&session.id)?;
    store.save(&session, &lock)?;
    Ok(session)
}

pub fn get_session(store: &SessionStore, id: &str) -> Result<Session, InterfaceError> {
    store.load(id)
}

/// Fills a draft session with candidates for every input. Inputs that fail
/// are recorded; the call fails only when every input failed.
pub fn request_clues(
    store: &SessionStore,
    id: &str,
    provider: &dyn ClueProvider,
    opts: GenerateOptions,
) -> Result<Session, InterfaceError> {
    let lock = store.try_lock(id)?;
    let mut session = store.load(id)?;
    if session.status != SessionStatus::Draft {
        return Err(InterfaceError::InvalidState(format!("clues were already requested (status {:?})", session.status)));
    }
    let results: Vec<_> = session
        .inputs
        .par_iter()
        .map(|req| clueforge::generate(req, provider, opts))
        .collect();
    let mut candidates = Vec::new();
    let mut failures = Vec::new();
    for (i, (req, res)) in session.inputs.iter().zip(results).enumerate() {
        match res {
            Ok(cs) => candidates.extend(
                cs.into_iter()
                    .enumerate()
                    .map(|(k, candidate)| CandidateEntry { id: candidate_id(i, k), input: i, candidate }),
            ),
            Err(e) => failures.push(InputFailure {
                input: i,
                answer: req.answer.to_string(),
                code: e.code().to_string(),
                message: e.to_string(),
            }),
        }
    }
    if candidates.is_empty() {
        return Err(InterfaceError::AllProvidersFailed(failures));
    }
    session.candidates = candidates;
    session.failures = failures;
    session.status = SessionStatus::CluesReady;
    store.save(&session, &lock)?;
    Ok(session)
}

/// Validated selections, ready for the generator.
#[derive(Debug, Clone)]
pub struct PreparedGeneration {
    pub session_id: String,
    pub selections: BTreeMap<String, String>,
    pub pairs: Vec<AnswerCluePair>,
    pub config: GenConfig,
}

/// Checks selections and marks a generation job as running. Nothing is
/// written when validation fails.
pub fn prepare_generation(
    store: &SessionStore,
    id: &str,
    candidate_ids: &[String],
    cfg: &GenConfig,
) -> Result<PreparedGeneration, InterfaceError> {
    cfg.validate()?;
    let lock = store.try_lock(id)?;
    let mut session = store.load(id)?;
    if session.generation_running() {
        return Err(InterfaceError::Conflict(format!("generation already running for session {id}")));
    }
    if session.status != SessionStatus::CluesReady {
        return Err(InterfaceError::InvalidState(format!("session is {:?}, expected clues_ready", session.status)));
    }
    if candidate_ids.is_empty() {
        return Err(InterfaceError::validation("select at least one candidate", vec![]));
    }
    let mut selections = BTreeMap::new();
    let mut pairs = Vec::new();
    for cid in candidate_ids {
        let entry = session.candidate(cid).ok_or_else(|| InterfaceError::UnknownCandidate(cid.clone()))?;
        let answer = entry.candidate.answer.to_string();
        if selections.insert(answer.clone(), entry.candidate.clue.clone()).is_some() {
            return Err(InterfaceError::validation(
                "one clue per answer",
                vec![format!("{answer} is selected more than once")],
            ));
        }
        pairs.push(AnswerCluePair {
            answer: entry.candidate.answer.clone(),
            clue: entry.candidate.clue.clone(),
            source: entry.candidate.provider_id.clone(),
        });
    }
    session.job = Some(Job { state: JobState::Running, started_at: Utc::now(), code: None, message: None });
    store.save(&session, &lock)?;
    Ok(PreparedGeneration { session_id: id.to_string(), selections, pairs, config: cfg.clone() })
}

/// Runs a prepared generation and stores the puzzle, or records the failure
/// on the job and returns it.
pub fn run_generation(store: &SessionStore, prepared: PreparedGeneration) -> Result<Session, InterfaceError> {
    let outcome = build_puzzle(&prepared.pairs, &prepared.config);
    let lock = store.lock_within(&prepared.session_id, JOB_LOCK_PATIENCE)?;
    let mut session = store.load(&prepared.session_id)?;
    match outcome {
        Ok((doc, generation)) => {
            session.selections = prepared.selections;
            session.puzzle = Some(doc);
            session.generation = Some(GenerationSummary {
                reason: generation.reason,
                score: generation.score,
                adjustments: generation.adjustments,
                elapsed_ms: generation.elapsed.as_millis() as u64,
                config: prepared.config,
            });
            session.status = SessionStatus::Generated;
            session.job = None;
            store.save(&session, &lock)?;
            Ok(session)
        }
        Err(e) => {
            let started_at = session.job.as_ref().map_or_else(Utc::now, |j| j.started_at);
            session.job = Some(Job {
                state: JobState::Failed,
                started_at,
                code: Some(e.code().to_string()),
                message: Some(e.to_string()),
            });
            store.save(&session, &lock)?;
            Err(e)
        }
    }
}

/// Selects one candidate per answer and builds the puzzle.
pub fn select_and_generate(
    store: &SessionStore,
    id: &str,
    candidate_ids: &[String],
    cfg: &GenConfig,
) -> Result<Session, InterfaceError> {
    let prepared = prepare_generation(store, id, candidate_ids, cfg)?;
    run_generation(store, prepared)
}
