use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::layout::{Direction, Layout};
use super::GridError;
use crate::textnorm::NormalizedWord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClueEntry {
    pub num: u32,
    pub clue: String,
    pub answer: String,
    pub len: usize,
    pub row: usize,
    pub col: usize,
}

/// A numbered puzzle: solution grid, cell numbers and clue lists.
///
/// `cells` holds one string per row with `.` for blocked cells; `numbers`
/// mirrors the grid with `null` where no entry starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleDocument {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<String>,
    pub numbers: Vec<Vec<Option<u32>>>,
    pub across: Vec<ClueEntry>,
    pub down: Vec<ClueEntry>,
}

/// Numbers the layout row-major: a cell gets the next number when an across
/// or down entry starts there, and both entries share it.
pub fn number_and_render(layout: &Layout, clues: &BTreeMap<NormalizedWord, String>) -> Result<PuzzleDocument, GridError> {
    for p in layout.placements() {
        if !clues.contains_key(&p.word) {
            return Err(GridError::MissingClue(p.word.to_string()));
        }
    }
    let (w, h) = (layout.width(), layout.height());
    let mut starts: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, p) in layout.placements().iter().enumerate() {
        starts.entry((p.row, p.col)).or_default().push(k);
    }
    let mut numbers = vec![vec![None; w]; h];
    let mut across = Vec::new();
    let mut down = Vec::new();
    let mut next = 1u32;
    for ((row, col), ks) in starts {
        numbers[row][col] = Some(next);
        for k in ks {
            let p = &layout.placements()[k];
            let entry = ClueEntry {
                num: next,
                clue: clues[&p.word].clone(),
                answer: p.word.to_string(),
                len: p.word.len(),
                row,
                col,
            };
            match p.direction {
                Direction::Across => across.push(entry),
                Direction::Down => down.push(entry),
            }
        }
        next += 1;
    }
    let cells = layout
        .grid()
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.unwrap_or('.')).collect())
        .collect();
    Ok(PuzzleDocument { width: w, height: h, cells, numbers, across, down })
}

impl PuzzleDocument {
    /// Canonical JSON bytes; both the CLI and the HTTP service emit exactly this.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("puzzle document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn answers(&self) -> Vec<&str> {
        self.across.iter().chain(&self.down).map(|e| e.answer.as_str()).collect()
    }

    fn letter(&self, row: usize, col: usize) -> Option<char> {
        self.cells[row].chars().nth(col).filter(|&c| c != '.')
    }

    /// Monospace grid with numbers, blocked cells shaded, followed by the
    /// clue lists. With `solved` the letters are filled in.
    pub fn render_text(&self, solved: bool) -> String {
        let mut out = String::new();
        let border: String = format!("+{}\n", "---+".repeat(self.width));
        out.push_str(&border);
        for r in 0..self.height {
            let mut top = String::from("|");
            let mut mid = String::from("|");
            for c in 0..self.width {
                match self.letter(r, c) {
                    Some(ch) => {
                        match self.numbers[r][c] {
                            Some(n) => write!(top, "{n:<3}|").unwrap(),
                            None => top.push_str("   |"),
                        }
                        let shown = if solved { ch } else { ' ' };
                        write!(mid, " {shown} |").unwrap();
                    }
                    None => {
                        top.push_str("###|");
                        mid.push_str("###|");
                    }
                }
            }
            out.push_str(&top);
            out.push('\n');
            out.push_str(&mid);
            out.push('\n');
            out.push_str(&border);
        }
        for (title, entries) in [("SOLDAN SAĞA", &self.across), ("YUKARIDAN AŞAĞIYA", &self.down)] {
            if entries.is_empty() {
                continue;
            }
            writeln!(out, "\n{title}").unwrap();
            for e in entries {
                writeln!(out, "{:>3}. {} ({})", e.num, e.clue, e.len).unwrap();
            }
        }
        out
    }
}
