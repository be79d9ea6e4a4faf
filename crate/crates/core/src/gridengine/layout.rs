use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::score::ScoreBreakdown;
use super::GridError;
use crate::textnorm::NormalizedWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Across,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Across, Direction::Down];

    /// (row step, col step)
    pub fn step(self) -> (usize, usize) {
        match self {
            Direction::Across => (0, 1),
            Direction::Down => (1, 0),
        }
    }

    fn bit(self) -> u8 {
        match self {
            Direction::Across => 1,
            Direction::Down => 2,
        }
    }

    pub fn other(self) -> Direction {
        match self {
            Direction::Across => Direction::Down,
            Direction::Down => Direction::Across,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Across => "across",
            Direction::Down => "down",
        })
    }
}

/// A word anchored at its first letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub word: NormalizedWord,
    pub row: usize,
    pub col: usize,
    pub direction: Direction,
}

impl Placement {
    pub fn new(word: NormalizedWord, row: usize, col: usize, direction: Direction) -> Self {
        Self { word, row, col, direction }
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        let len = self.word.len();
        match self.direction {
            Direction::Across => self.row < height && self.col + len <= width,
            Direction::Down => self.col < width && self.row + len <= height,
        }
    }

    /// Cells in word order with the letter each one carries.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, char)> + '_ {
        let (dr, dc) = self.direction.step();
        self.word
            .letters()
            .enumerate()
            .map(move |(i, ch)| (self.row + dr * i, self.col + dc * i, ch))
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{},{},{}", self.word, self.row, self.col, self.direction)
    }
}

/// Why a placement is not allowed on a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Illegal {
    OutOfBounds,
    DuplicateWord,
    LetterConflict { row: usize, col: usize },
    SameDirectionOverlap { row: usize, col: usize },
    FlankOccupied { row: usize, col: usize },
    SideContact { row: usize, col: usize },
    NoIntersection,
    NoNewCells,
}

impl fmt::Display for Illegal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Illegal::OutOfBounds => write!(f, "out of bounds"),
            Illegal::DuplicateWord => write!(f, "word already placed"),
            Illegal::LetterConflict { row, col } => write!(f, "letter conflict at ({row},{col})"),
            Illegal::SameDirectionOverlap { row, col } => {
                write!(f, "overlaps a parallel word at ({row},{col})")
            }
            Illegal::FlankOccupied { row, col } => write!(f, "word end touches ({row},{col})"),
            Illegal::SideContact { row, col } => write!(f, "side contact at ({row},{col})"),
            Illegal::NoIntersection => write!(f, "does not cross the layout"),
            Illegal::NoNewCells => write!(f, "adds no new cells"),
        }
    }
}

/// What a legal placement adds to the layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gain {
    pub new_cells: usize,
    pub crossings: usize,
}

/// Criss-cross grid state.
///
/// Cell letters and per-direction coverage are maintained alongside the
/// placement list, together with running counts of filled and crossing
/// cells, so scoring a layout or a candidate move is O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    width: usize,
    height: usize,
    placements: Vec<Placement>,
    letters: Vec<Option<char>>,
    coverage: Vec<u8>,
    filled: usize,
    crossings: usize,
}

impl Layout {
    pub fn new(width: usize, height: usize) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::InvalidConfig("grid dimensions must be positive".into()));
        }
        Ok(Self {
            width,
            height,
            placements: Vec::new(),
            letters: vec![None; width * height],
            coverage: vec![0; width * height],
            filled: 0,
            crossings: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn filled_cells(&self) -> usize {
        self.filled
    }

    pub fn crossing_cells(&self) -> usize {
        self.crossings
    }

    fn idx(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    pub fn letter(&self, row: usize, col: usize) -> Option<char> {
        if row < self.height && col < self.width {
            self.letters[self.idx(row, col)]
        } else {
            None
        }
    }

    /// Number of placements covering the cell (0, 1 or 2).
    pub fn coverage(&self, row: usize, col: usize) -> usize {
        if row < self.height && col < self.width {
            self.coverage[self.idx(row, col)].count_ones() as usize
        } else {
            0
        }
    }

    pub fn contains_word(&self, word: &NormalizedWord) -> bool {
        self.placements.iter().any(|p| &p.word == word)
    }

    pub fn placement_of(&self, word: &NormalizedWord) -> Option<&Placement> {
        self.placements.iter().find(|p| &p.word == word)
    }

    /// Crossing cells on one placement.
    pub fn crossings_on(&self, p: &Placement) -> usize {
        p.cells().filter(|&(r, c, _)| self.coverage(r, c) == 2).count()
    }

    fn occupied(&self, row: Option<usize>, col: Option<usize>) -> bool {
        match (row, col) {
            (Some(r), Some(c)) => self.letter(r, c).is_some(),
            _ => false,
        }
    }

    /// Checks every legality rule for `p` and returns what it would add.
    pub fn check(&self, p: &Placement) -> Result<Gain, Illegal> {
        if !p.fits(self.width, self.height) {
            return Err(Illegal::OutOfBounds);
        }
        if self.contains_word(&p.word) {
            return Err(Illegal::DuplicateWord);
        }
        let len = p.word.len();
        let (dr, dc) = p.direction.step();
        if p.row >= dr && p.col >= dc && self.letter(p.row - dr, p.col - dc).is_some() {
            return Err(Illegal::FlankOccupied { row: p.row - dr, col: p.col - dc });
        }
        let (er, ec) = (p.row + dr * len, p.col + dc * len);
        if self.letter(er, ec).is_some() {
            return Err(Illegal::FlankOccupied { row: er, col: ec });
        }
        let bit = p.direction.bit();
        let mut gain = Gain { new_cells: 0, crossings: 0 };
        for (r, c, ch) in p.cells() {
            let i = self.idx(r, c);
            match self.letters[i] {
                Some(existing) => {
                    if existing != ch {
                        return Err(Illegal::LetterConflict { row: r, col: c });
                    }
                    if self.coverage[i] & bit != 0 {
                        return Err(Illegal::SameDirectionOverlap { row: r, col: c });
                    }
                    gain.crossings += 1;
                }
                None => {
                    // perpendicular neighbours of a fresh cell must be empty
                    let side = match p.direction {
                        Direction::Across => [
                            (r.checked_sub(1), Some(c)),
                            (Some(r + 1), Some(c)),
                        ],
                        Direction::Down => [
                            (Some(r), c.checked_sub(1)),
                            (Some(r), Some(c + 1)),
                        ],
                    };
                    for (sr, sc) in side {
                        if self.occupied(sr, sc) {
                            return Err(Illegal::SideContact { row: sr.unwrap(), col: sc.unwrap() });
                        }
                    }
                    gain.new_cells += 1;
                }
            }
        }
        if !self.placements.is_empty() && gain.crossings == 0 {
            return Err(Illegal::NoIntersection);
        }
        if gain.new_cells == 0 {
            return Err(Illegal::NoNewCells);
        }
        Ok(gain)
    }

    /// Every legal placement of `word`, sorted by (row, col, direction).
    pub fn legal_placements(&self, word: &NormalizedWord) -> Vec<Placement> {
        self.legal_placements_with_gain(word).into_iter().map(|(p, _)| p).collect()
    }

    pub fn legal_placements_with_gain(&self, word: &NormalizedWord) -> Vec<(Placement, Gain)> {
        let len = word.len();
        if len == 0 || len > self.width.max(self.height) || self.contains_word(word) {
            return Vec::new();
        }
        let mut starts: BTreeSet<(usize, usize, Direction)> = BTreeSet::new();
        if self.placements.is_empty() {
            for r in 0..self.height {
                for c in 0..self.width {
                    starts.insert((r, c, Direction::Across));
                    starts.insert((r, c, Direction::Down));
                }
            }
        } else {
            let letters = word.letter_vec();
            for r in 0..self.height {
                for c in 0..self.width {
                    let Some(cell) = self.letters[self.idx(r, c)] else { continue };
                    for (i, &ch) in letters.iter().enumerate() {
                        if ch != cell {
                            continue;
                        }
                        if c >= i {
                            starts.insert((r, c - i, Direction::Across));
                        }
                        if r >= i {
                            starts.insert((r - i, c, Direction::Down));
                        }
                    }
                }
            }
        }
        starts
            .into_iter()
            .filter_map(|(r, c, d)| {
                let p = Placement::new(word.clone(), r, c, d);
                self.check(&p).ok().map(|g| (p, g))
            })
            .collect()
    }

    pub fn apply(&mut self, p: Placement) -> Result<Gain, GridError> {
        let gain = self.check(&p).map_err(|reason| GridError::IllegalPlacement {
            placement: p.to_string(),
            reason: reason.to_string(),
        })?;
        let bit = p.direction.bit();
        for (r, c, ch) in p.cells() {
            let i = self.idx(r, c);
            if self.letters[i].is_none() {
                self.letters[i] = Some(ch);
                self.filled += 1;
            } else {
                self.crossings += 1;
            }
            self.coverage[i] |= bit;
        }
        self.placements.push(p);
        Ok(gain)
    }

    /// Removes a word; cells still covered by a crossing word keep their letter.
    pub fn remove(&mut self, word: &NormalizedWord) -> Result<Placement, GridError> {
        let pos = self
            .placements
            .iter()
            .position(|p| &p.word == word)
            .ok_or_else(|| GridError::WordNotPresent(word.to_string()))?;
        let p = self.placements.remove(pos);
        let bit = p.direction.bit();
        for (r, c, _) in p.cells() {
            let i = self.idx(r, c);
            self.coverage[i] &= !bit;
            if self.coverage[i] == 0 {
                self.letters[i] = None;
                self.filled -= 1;
            } else {
                self.crossings -= 1;
            }
        }
        Ok(p)
    }

    pub fn clear(&mut self) {
        self.placements.clear();
        self.letters.iter_mut().for_each(|l| *l = None);
        self.coverage.iter_mut().for_each(|c| *c = 0);
        self.filled = 0;
        self.crossings = 0;
    }

    /// Score from the running counts.
    pub fn score(&self, crossing_weight: f64) -> ScoreBreakdown {
        ScoreBreakdown::from_counts(
            self.placements.len(),
            self.crossings,
            self.filled,
            self.width * self.height,
            crossing_weight,
        )
    }

    /// Placements whose end cells or single-covered cells touch another
    /// letter. Legal construction never produces these; removing a word
    /// whose crossings were adjacent can.
    pub fn contact_violations(&self) -> Vec<usize> {
        let mut bad = Vec::new();
        for (k, p) in self.placements.iter().enumerate() {
            let (dr, dc) = p.direction.step();
            let len = p.word.len();
            let mut violated = (p.row >= dr && p.col >= dc && self.letter(p.row - dr, p.col - dc).is_some())
                || self.letter(p.row + dr * len, p.col + dc * len).is_some();
            if !violated {
                violated = p.cells().any(|(r, c, _)| {
                    if self.coverage(r, c) != 1 {
                        return false;
                    }
                    match p.direction {
                        Direction::Across => {
                            (r > 0 && self.letter(r - 1, c).is_some()) || self.letter(r + 1, c).is_some()
                        }
                        Direction::Down => {
                            (c > 0 && self.letter(r, c - 1).is_some()) || self.letter(r, c + 1).is_some()
                        }
                    }
                });
            }
            if violated {
                bad.push(k);
            }
        }
        bad
    }

    /// Rows of the grid, `None` for empty cells.
    pub fn grid(&self) -> Vec<Vec<Option<char>>> {
        self.letters.chunks(self.width).map(|row| row.to_vec()).collect()
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.grid() {
            let line: String = row.iter().map(|c| c.unwrap_or('.')).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
