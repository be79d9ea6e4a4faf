use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::layout::Layout;

pub const DEFAULT_CROSSING_WEIGHT: f64 = 0.5;

/// Layout quality: `(words + w·crossings) × fill_ratio × crossing_density`
/// with `w` = 0.5 by default.
///
/// `fill_ratio` is filled cells over grid area; `crossing_density` is
/// crossing cells over filled cells (0 on an empty grid). A crossing cell is
/// counted once no matter how it is shared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub words: usize,
    pub crossings: usize,
    pub filled: usize,
    pub fill_ratio: f64,
    pub crossing_density: f64,
    pub score: f64,
}

impl ScoreBreakdown {
    pub fn from_counts(words: usize, crossings: usize, filled: usize, area: usize, weight: f64) -> Self {
        let fill_ratio = if area == 0 { 0.0 } else { filled as f64 / area as f64 };
        let crossing_density = if filled == 0 { 0.0 } else { crossings as f64 / filled as f64 };
        let score = (words as f64 + weight * crossings as f64) * fill_ratio * crossing_density;
        Self { words, crossings, filled, fill_ratio, crossing_density, score }
    }

    pub fn empty() -> Self {
        Self::from_counts(0, 0, 0, 1, DEFAULT_CROSSING_WEIGHT)
    }

    /// Ordering key used to rank layouts: score first, then word count and
    /// crossings so that zero-score layouts still prefer more words.
    pub fn rank(&self) -> (f64, usize, usize) {
        (self.score, self.words, self.crossings)
    }

    pub fn beats(&self, other: &ScoreBreakdown) -> bool {
        let (a, b) = (self.rank(), other.rank());
        a.0 > b.0 || (a.0 == b.0 && (a.1, a.2) > (b.1, b.2))
    }
}

/// Full recount from the placement list alone, ignoring the layout's running
/// counters.
pub fn recompute(layout: &Layout, weight: f64) -> ScoreBreakdown {
    let mut cover: HashMap<(usize, usize), usize> = HashMap::new();
    for p in layout.placements() {
        for (r, c, _) in p.cells() {
            *cover.entry((r, c)).or_default() += 1;
        }
    }
    let filled = cover.len();
    let crossings = cover.values().filter(|&&n| n >= 2).count();
    ScoreBreakdown::from_counts(
        layout.placements().len(),
        crossings,
        filled,
        layout.width() * layout.height(),
        weight,
    )
}
