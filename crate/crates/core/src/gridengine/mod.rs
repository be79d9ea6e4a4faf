//! Crossword layout construction.
//!
//! Words are laid out criss-cross style on a rectangular grid. A placement is
//! legal when it stays in bounds, agrees with every letter it overlaps,
//! crosses the existing layout (unless the grid is empty), has empty cells
//! just before and after it, and touches no other letter sideways except at
//! crossings. The search in [`search`] maximizes [`ScoreBreakdown::score`].

mod layout;
mod render;
mod score;
pub mod search;

pub use layout::{Direction, Gain, Illegal, Layout, Placement};
pub use render::{number_and_render, ClueEntry, PuzzleDocument};
pub use score::{recompute, ScoreBreakdown, DEFAULT_CROSSING_WEIGHT};
pub use search::{generate, GenConfig, Generation, Generator, TerminationReason, TraceRecord};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("illegal placement {placement}: {reason}")]
    IllegalPlacement { placement: String, reason: String },
    #[error("word {0} is not in the layout")]
    WordNotPresent(String),
    #[error("no input word fits the grid")]
    NoWordFits,
    #[error("word list is empty")]
    EmptyWordList,
    #[error("no clue for placed answer {0}")]
    MissingClue(String),
    #[error("invalid generation config: {0}")]
    InvalidConfig(String),
}
