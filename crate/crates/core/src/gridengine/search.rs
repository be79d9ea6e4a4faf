//! Greedy insertion with removal and reset perturbations.
//!
//! Each cycle either applies the best-scoring legal placement among the
//! unplaced words or, when none exists, perturbs the layout: the least
//! crossed words are removed, and after `max_resets` removal rounds that did
//! not improve the best layout the grid is cleared and restarted from a
//! reshuffled word order. The best layout seen is returned.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::layout::{Direction, Layout, Placement};
use super::score::{ScoreBreakdown, DEFAULT_CROSSING_WEIGHT};
use super::GridError;
use crate::corpus::AnswerCluePair;
use crate::textnorm::NormalizedWord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub width: usize,
    pub height: usize,
    /// Word count that, together with `target_fill_ratio`, ends the search.
    pub min_words: usize,
    pub target_fill_ratio: f64,
    /// Removal and reset operations allowed in one run.
    pub max_adjustments: usize,
    pub time_budget_ms: u64,
    pub seed: u64,
    pub removal_batch: usize,
    /// Fruitless removal rounds tolerated before a reset.
    pub max_resets: usize,
    pub crossing_weight: f64,
    /// Threads used to evaluate candidate moves. Results do not depend on it.
    pub workers: usize,
    pub trace: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            width: 15,
            height: 15,
            min_words: 10,
            target_fill_ratio: 0.3,
            max_adjustments: 40,
            time_budget_ms: 5_000,
            seed: 42,
            removal_batch: 2,
            max_resets: 3,
            crossing_weight: DEFAULT_CROSSING_WEIGHT,
            workers: 1,
            trace: false,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GridError> {
        let bad = |m: &str| Err(GridError::InvalidConfig(m.to_string()));
        if self.width == 0 || self.height == 0 {
            return bad("width and height must be positive");
        }
        if self.min_words == 0 {
            return bad("min_words must be positive");
        }
        if !(self.target_fill_ratio > 0.0 && self.target_fill_ratio <= 1.0) {
            return bad("target_fill_ratio must be in (0, 1]");
        }
        if self.time_budget_ms == 0 {
            return bad("time_budget_ms must be positive");
        }
        if self.removal_batch == 0 || self.max_resets == 0 || self.workers == 0 {
            return bad("removal_batch, max_resets and workers must be positive");
        }
        if !(self.crossing_weight >= 0.0 && self.crossing_weight.is_finite()) {
            return bad("crossing_weight must be a non-negative number");
        }
        Ok(())
    }

    pub fn time_budget(&self) -> Duration {
        Duration::from_millis(self.time_budget_ms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    MinWordsAndFillReached,
    MaxAdjustmentsExhausted,
    TimeBudgetExhausted,
    NoMovesRemain,
}

/// One line of the optional search trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub action: String,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct Generation {
    pub layout: Layout,
    pub score: ScoreBreakdown,
    pub reason: TerminationReason,
    pub adjustments: usize,
    pub cycles: usize,
    /// Time from start to the check that stopped the search.
    pub elapsed: Duration,
    /// Longest interval between two consecutive stop checks.
    pub max_cycle: Duration,
    pub trace: Vec<TraceRecord>,
}

impl Generation {
    /// Trace as line-delimited JSON.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|t| serde_json::to_string(t).expect("trace record serializes") + "\n")
            .collect()
    }
}

/// Layout search over a word list.
#[derive(Debug, Clone)]
pub struct Generator {
    cfg: GenConfig,
    priority: BTreeSet<NormalizedWord>,
}

struct Move {
    placement: Placement,
    score: ScoreBreakdown,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        Self { cfg, priority: BTreeSet::new() }
    }

    /// Words tried before all others at every insertion step and removed last.
    pub fn with_priority(mut self, words: impl IntoIterator<Item = NormalizedWord>) -> Self {
        self.priority.extend(words);
        self
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn run(&self, words: &[AnswerCluePair]) -> Result<Generation, GridError> {
        self.cfg.validate()?;
        if words.is_empty() {
            return Err(GridError::EmptyWordList);
        }
        let cfg = &self.cfg;
        let longest_side = cfg.width.max(cfg.height);
        // Canonical order makes the result independent of input order.
        let pool: Vec<NormalizedWord> = words
            .iter()
            .map(|p| p.answer.clone())
            .filter(|w| !w.is_empty() && w.len() <= longest_side)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if pool.is_empty() {
            return Err(GridError::NoWordFits);
        }

        let pool_threads = if cfg.workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.workers)
                    .build()
                    .map_err(|e| GridError::InvalidConfig(e.to_string()))?,
            )
        } else {
            None
        };

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut layout = Layout::new(cfg.width, cfg.height)?;
        let mut best = layout.clone();
        let mut best_score = layout.score(cfg.crossing_weight);
        let mut start_order: Option<Vec<NormalizedWord>> = None;
        let mut tabu: BTreeSet<NormalizedWord> = BTreeSet::new();
        let mut adjustments = 0usize;
        let mut cycles = 0usize;
        let mut fruitless = 0usize;
        let mut best_at_last_stall: Option<ScoreBreakdown> = None;
        let mut trace = Vec::new();

        let started = Instant::now();
        let mut last_check = Duration::ZERO;
        let mut max_cycle = Duration::ZERO;
        let budget = cfg.time_budget();

        let reason = loop {
            let now = started.elapsed();
            max_cycle = max_cycle.max(now - last_check);
            last_check = now;
            if now >= budget {
                break TerminationReason::TimeBudgetExhausted;
            }
            let current = layout.score(cfg.crossing_weight);
            if current.words >= cfg.min_words && current.fill_ratio >= cfg.target_fill_ratio {
                break TerminationReason::MinWordsAndFillReached;
            }
            let unplaced: Vec<&NormalizedWord> =
                pool.iter().filter(|w| !layout.contains_word(w)).collect();
            if unplaced.is_empty() {
                break TerminationReason::NoMovesRemain;
            }
            cycles += 1;

            let eligible: Vec<&NormalizedWord> =
                unplaced.iter().copied().filter(|w| !tabu.contains(*w)).collect();
            let chosen = if layout.is_empty() {
                self.opening_move(&layout, &eligible, start_order.as_deref())
            } else {
                self.best_move(&layout, &eligible, pool_threads.as_ref())
            };

            if let Some(mv) = chosen {
                let action = format!("place {}", mv.placement);
                layout.apply(mv.placement)?;
                tabu.clear();
                if mv.score.beats(&best_score) {
                    best = layout.clone();
                    best_score = mv.score;
                }
                if cfg.trace {
                    trace.push(TraceRecord { step: cycles, action, score: mv.score.score });
                }
                continue;
            }
            if !tabu.is_empty() {
                // retry once with recently removed words allowed again
                tabu.clear();
                continue;
            }

            // Stalled: perturb or stop.
            if adjustments >= cfg.max_adjustments {
                break TerminationReason::MaxAdjustmentsExhausted;
            }
            adjustments += 1;
            match best_at_last_stall {
                Some(prev) if !best_score.beats(&prev) => fruitless += 1,
                _ => fruitless = 0,
            }
            best_at_last_stall = Some(best_score);

            let action = if fruitless >= cfg.max_resets {
                fruitless = 0;
                best_at_last_stall = None;
                layout.clear();
                let mut order = pool.clone();
                order.shuffle(&mut rng);
                start_order = Some(order);
                "reset".to_string()
            } else {
                let removed = self.remove_weakest(&mut layout)?;
                let names: Vec<String> = removed.iter().map(|w| w.to_string()).collect();
                tabu.extend(removed);
                format!("remove {}", names.join(","))
            };
            if cfg.trace {
                trace.push(TraceRecord {
                    step: cycles,
                    action,
                    score: layout.score(cfg.crossing_weight).score,
                });
            }
        };

        Ok(Generation {
            score: best.score(cfg.crossing_weight),
            layout: best,
            reason,
            adjustments,
            cycles,
            elapsed: last_check,
            max_cycle,
            trace,
        })
    }

    fn tiers<'a>(&self, eligible: &[&'a NormalizedWord]) -> [Vec<&'a NormalizedWord>; 2] {
        let (first, rest): (Vec<_>, Vec<_>) =
            eligible.iter().copied().partition(|w| self.priority.contains(*w));
        [first, rest]
    }

    /// First word on an empty grid: the longest (then alphabetically first)
    /// eligible word, or the first in `order` after a reset, centred.
    fn opening_move(&self, layout: &Layout, eligible: &[&NormalizedWord], order: Option<&[NormalizedWord]>) -> Option<Move> {
        for tier in self.tiers(eligible) {
            let word = match order {
                Some(order) => order.iter().find(|w| tier.contains(w)),
                None => tier
                    .iter()
                    .copied()
                    .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b))),
            };
            let Some(word) = word else { continue };
            let (w, h) = (layout.width(), layout.height());
            let len = word.len();
            let placement = if len <= w {
                Placement::new(word.clone(), h / 2, (w - len) / 2, Direction::Across)
            } else {
                Placement::new(word.clone(), (h - len) / 2, w / 2, Direction::Down)
            };
            let gain = layout.check(&placement).ok()?;
            let score = ScoreBreakdown::from_counts(1, 0, gain.new_cells, w * h, self.cfg.crossing_weight);
            return Some(Move { placement, score });
        }
        None
    }

    /// Highest resulting score; ties go to the alphabetically first word,
    /// then (row, col, direction).
    fn best_move(&self, layout: &Layout, eligible: &[&NormalizedWord], threads: Option<&rayon::ThreadPool>) -> Option<Move> {
        let area = layout.width() * layout.height();
        let weight = self.cfg.crossing_weight;
        let evaluate = |word: &NormalizedWord| -> Option<Move> {
            let mut best: Option<Move> = None;
            for (placement, gain) in layout.legal_placements_with_gain(word) {
                let score = ScoreBreakdown::from_counts(
                    layout.placements().len() + 1,
                    layout.crossing_cells() + gain.crossings,
                    layout.filled_cells() + gain.new_cells,
                    area,
                    weight,
                );
                // placements arrive sorted, so only a strictly better score replaces
                if best.as_ref().map_or(true, |b| score.beats(&b.score)) {
                    best = Some(Move { placement, score });
                }
            }
            best
        };
        for tier in self.tiers(eligible) {
            if tier.is_empty() {
                continue;
            }
            let per_word: Vec<Option<Move>> = match threads {
                Some(pool) => pool.install(|| tier.par_iter().map(|w| evaluate(w)).collect()),
                None => tier.iter().map(|w| evaluate(w)).collect(),
            };
            // tier is in alphabetical order; keep the first of equal scores
            let mut best: Option<Move> = None;
            for mv in per_word.into_iter().flatten() {
                if best.as_ref().map_or(true, |b| mv.score.beats(&b.score)) {
                    best = Some(mv);
                }
            }
            if best.is_some() {
                return best;
            }
        }
        None
    }

    /// Removes up to `removal_batch` words with the fewest crossings
    /// (non-priority first), then any words left touching illegally.
    fn remove_weakest(&self, layout: &mut Layout) -> Result<Vec<NormalizedWord>, GridError> {
        let mut ranked: Vec<(bool, usize, NormalizedWord)> = layout
            .placements()
            .iter()
            .map(|p| (self.priority.contains(&p.word), layout.crossings_on(p), p.word.clone()))
            .collect();
        ranked.sort();
        let mut removed = Vec::new();
        for (_, _, word) in ranked.into_iter().take(self.cfg.removal_batch) {
            layout.remove(&word)?;
            removed.push(word);
        }
        loop {
            let bad = layout.contact_violations();
            let Some(&k) = bad.first() else { break };
            let word = layout.placements()[k].word.clone();
            layout.remove(&word)?;
            removed.push(word);
        }
        Ok(removed)
    }
}

/// Convenience wrapper for [`Generator::run`] without priority words.
pub fn generate(words: &[AnswerCluePair], cfg: &GenConfig) -> Result<Generation, GridError> {
    Generator::new(cfg.clone()).run(words)
}
