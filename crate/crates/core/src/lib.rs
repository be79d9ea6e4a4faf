//! Turkish educational crossword construction.
//!
//! The crate covers the whole pipeline from raw corpora to a numbered puzzle:
//!
//! - [`textnorm`]: Turkish casing, grid-letter validation, tokenization.
//! - [`corpus`]: answer/clue and text-record ingestion, filters, statistics.
//! - [`clueforge`]: clue candidates from a corpus lookup or a chat model.
//! - [`gridengine`]: heuristic layout search and puzzle numbering/rendering.
//! - [`evalkit`]: ROUGE-1/2/L and human acceptability aggregation.
//! - [`interface`]: educator sessions, persistence, HTTP service, CLI helpers.
//!
//! Runnable walkthroughs for each part live in `examples/`.

pub mod clueforge;
pub mod corpus;
pub mod evalkit;
pub mod gridengine;
pub mod interface;
pub mod textnorm;
