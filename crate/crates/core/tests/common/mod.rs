//! Independent oracles shared by the integration tests and the acceptance
//! harness. Nothing here calls the library's own legality, scoring or ROUGE
//! code; each check is recomputed from raw data.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;

use karekurucu::corpus::{AnswerCluePair, RejectRule};
use karekurucu::gridengine::{Direction, Layout, Placement, PuzzleDocument};
use karekurucu::textnorm::{to_grid_form, NormalizedWord};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn w(s: &str) -> NormalizedWord {
    to_grid_form(s).unwrap()
}

/// The 30-word answer/clue fixture.
pub fn fixture_30() -> Vec<AnswerCluePair> {
    let path = data_dir().join("samples/pairs.tsv");
    let out = karekurucu::corpus::read_pairs_file(&path).unwrap();
    assert_eq!(out.pairs.len(), 30, "fixture must hold 30 pairs");
    out.pairs
}

/// Letters and per-direction coverage rebuilt from a placement list.
pub struct OracleGrid {
    pub width: usize,
    pub height: usize,
    pub letters: Vec<Vec<Option<char>>>,
    pub across: Vec<Vec<bool>>,
    pub down: Vec<Vec<bool>>,
    pub words: HashSet<String>,
}

fn cells_of(p: &Placement) -> Vec<(usize, usize, char)> {
    p.word
        .as_str()
        .chars()
        .enumerate()
        .map(|(k, ch)| match p.direction {
            Direction::Across => (p.row, p.col + k, ch),
            Direction::Down => (p.row + k, p.col, ch),
        })
        .collect()
}

impl OracleGrid {
    pub fn build(width: usize, height: usize, placements: &[Placement]) -> Self {
        let mut g = OracleGrid {
            width,
            height,
            letters: vec![vec![None; width]; height],
            across: vec![vec![false; width]; height],
            down: vec![vec![false; width]; height],
            words: HashSet::new(),
        };
        for p in placements {
            g.words.insert(p.word.to_string());
            for (r, c, ch) in cells_of(p) {
                g.letters[r][c] = Some(ch);
                match p.direction {
                    Direction::Across => g.across[r][c] = true,
                    Direction::Down => g.down[r][c] = true,
                }
            }
        }
        g
    }

    fn at(&self, r: isize, c: isize) -> Option<char> {
        if r < 0 || c < 0 || r as usize >= self.height || c as usize >= self.width {
            return None;
        }
        self.letters[r as usize][c as usize]
    }

    /// Legality of one placement under the criss-cross rules.
    pub fn is_legal(&self, word: &str, row: usize, col: usize, dir: Direction) -> bool {
        let letters: Vec<char> = word.chars().collect();
        let n = letters.len();
        let (dr, dc): (isize, isize) = match dir {
            Direction::Across => (0, 1),
            Direction::Down => (1, 0),
        };
        let end_r = row + if dir == Direction::Down { n } else { 1 };
        let end_c = col + if dir == Direction::Across { n } else { 1 };
        if n == 0 || end_r > self.height || end_c > self.width {
            return false;
        }
        if self.words.contains(word) {
            return false;
        }
        let (r0, c0) = (row as isize, col as isize);
        if self.at(r0 - dr, c0 - dc).is_some() || self.at(r0 + dr * n as isize, c0 + dc * n as isize).is_some() {
            return false;
        }
        let mut crossings = 0;
        let mut fresh = 0;
        for (k, &ch) in letters.iter().enumerate() {
            let (r, c) = (r0 + dr * k as isize, c0 + dc * k as isize);
            let (ru, cu) = (r as usize, c as usize);
            match self.letters[ru][cu] {
                Some(existing) => {
                    let same_dir = match dir {
                        Direction::Across => self.across[ru][cu],
                        Direction::Down => self.down[ru][cu],
                    };
                    if existing != ch || same_dir {
                        return false;
                    }
                    crossings += 1;
                }
                None => {
                    // side neighbours perpendicular to the word axis
                    if self.at(r + dc, c + dr).is_some() || self.at(r - dc, c - dr).is_some() {
                        return false;
                    }
                    fresh += 1;
                }
            }
        }
        if !self.words.is_empty() && crossings == 0 {
            return false;
        }
        fresh > 0
    }
}

/// Every legal placement of `word`, by exhaustive (row, col, dir) search.
pub fn brute_force_legal(width: usize, height: usize, placements: &[Placement], word: &NormalizedWord) -> BTreeSet<(usize, usize, Direction)> {
    let g = OracleGrid::build(width, height, placements);
    let mut out = BTreeSet::new();
    for r in 0..height {
        for c in 0..width {
            for d in [Direction::Across, Direction::Down] {
                if g.is_legal(word.as_str(), r, c, d) {
                    out.insert((r, c, d));
                }
            }
        }
    }
    out
}

/// Checks bounds, crossing agreement, duplicate words, same-direction
/// overlap, and that every maximal run of two or more letters in a row or
/// column is exactly one placed word.
pub fn validate_placements(width: usize, height: usize, placements: &[Placement]) -> Result<(), String> {
    let mut letters: Vec<Vec<Option<char>>> = vec![vec![None; width]; height];
    let mut cover: Vec<Vec<[bool; 2]>> = vec![vec![[false; 2]; width]; height];
    let mut seen = HashSet::new();
    let mut starts: BTreeMap<(Direction, usize, usize), String> = BTreeMap::new();
    for p in placements {
        if !seen.insert(p.word.to_string()) {
            return Err(format!("duplicate word {}", p.word));
        }
        let n = p.word.as_str().chars().count();
        let fits = match p.direction {
            Direction::Across => p.row < height && p.col + n <= width,
            Direction::Down => p.col < width && p.row + n <= height,
        };
        if !fits {
            return Err(format!("{} out of bounds", p.word));
        }
        let d = if p.direction == Direction::Across { 0 } else { 1 };
        for (r, c, ch) in cells_of(p) {
            if let Some(old) = letters[r][c] {
                if old != ch {
                    return Err(format!("letter clash at ({r},{c})"));
                }
            }
            if cover[r][c][d] {
                return Err(format!("same-direction overlap at ({r},{c})"));
            }
            cover[r][c][d] = true;
            letters[r][c] = Some(ch);
        }
        starts.insert((p.direction, p.row, p.col), p.word.to_string());
    }
    // maximal runs
    let mut runs = 0;
    for dir in [Direction::Across, Direction::Down] {
        let (outer, inner) = if dir == Direction::Across { (height, width) } else { (width, height) };
        for o in 0..outer {
            let mut k = 0;
            while k < inner {
                let get = |i: usize| if dir == Direction::Across { letters[o][i] } else { letters[i][o] };
                if get(k).is_none() {
                    k += 1;
                    continue;
                }
                let start = k;
                let mut run = String::new();
                while k < inner && get(k).is_some() {
                    run.push(get(k).unwrap());
                    k += 1;
                }
                if run.chars().count() >= 2 {
                    runs += 1;
                    let (r, c) = if dir == Direction::Across { (o, start) } else { (start, o) };
                    match starts.get(&(dir, r, c)) {
                        Some(word) if *word == run => {}
                        _ => return Err(format!("stray run {run} at ({r},{c}) {dir:?}")),
                    }
                }
            }
        }
    }
    // single-letter words would be invisible as runs
    if runs != placements.len() {
        return Err(format!("{} runs for {} placements", runs, placements.len()));
    }
    Ok(())
}

pub fn validate_layout(layout: &Layout) -> Result<(), String> {
    validate_placements(layout.width(), layout.height(), layout.placements())?;
    let g = OracleGrid::build(layout.width(), layout.height(), layout.placements());
    for r in 0..layout.height() {
        for c in 0..layout.width() {
            if layout.letter(r, c) != g.letters[r][c] {
                return Err(format!("cell ({r},{c}) differs from placements"));
            }
        }
    }
    Ok(())
}

/// Document-level checks: cells agree with the entries, numbering is the
/// row-major order of start cells, and every entry carries a clue.
pub fn validate_document(doc: &PuzzleDocument) -> Result<(), String> {
    if doc.cells.len() != doc.height || doc.numbers.len() != doc.height {
        return Err("row count mismatch".into());
    }
    let grid: Vec<Vec<char>> = doc.cells.iter().map(|r| r.chars().collect()).collect();
    if grid.iter().any(|r| r.len() != doc.width) {
        return Err("column count mismatch".into());
    }
    let mut placements = Vec::new();
    for (dir, entries) in [(Direction::Across, &doc.across), (Direction::Down, &doc.down)] {
        for e in entries {
            if e.clue.trim().is_empty() {
                return Err(format!("entry {} has no clue", e.answer));
            }
            let word = to_grid_form(&e.answer).map_err(|x| x.to_string())?;
            if word.len() != e.len {
                return Err(format!("entry {} length mismatch", e.answer));
            }
            placements.push(Placement::new(word, e.row, e.col, dir));
        }
    }
    validate_placements(doc.width, doc.height, &placements)?;
    let g = OracleGrid::build(doc.width, doc.height, &placements);
    for r in 0..doc.height {
        for c in 0..doc.width {
            let expect = g.letters[r][c].unwrap_or('.');
            if grid[r][c] != expect {
                return Err(format!("cell ({r},{c}) is {} but entries give {expect}", grid[r][c]));
            }
        }
    }
    let start_cells: BTreeSet<(usize, usize)> = placements.iter().map(|p| (p.row, p.col)).collect();
    let numbering: BTreeMap<(usize, usize), u32> = start_cells.iter().enumerate().map(|(i, &rc)| (rc, i as u32 + 1)).collect();
    for r in 0..doc.height {
        for c in 0..doc.width {
            if doc.numbers[r][c] != numbering.get(&(r, c)).copied() {
                return Err(format!("number at ({r},{c}) is {:?}", doc.numbers[r][c]));
            }
        }
    }
    for e in doc.across.iter().chain(&doc.down) {
        if numbering.get(&(e.row, e.col)) != Some(&e.num) {
            return Err(format!("entry {} numbered {}", e.answer, e.num));
        }
    }
    Ok(())
}

/// Clipped n-gram overlap by explicit multiset matching.
pub fn oracle_ngram(cand: &[String], reference: &[String], n: usize) -> (usize, usize, usize) {
    let grams = |t: &[String]| -> Vec<Vec<String>> {
        if t.len() < n {
            Vec::new()
        } else {
            (0..=t.len() - n).map(|i| t[i..i + n].to_vec()).collect()
        }
    };
    let cg = grams(cand);
    let mut rg = grams(reference);
    let mut overlap = 0;
    for g in &cg {
        if let Some(pos) = rg.iter().position(|x| x == g) {
            rg.remove(pos);
            overlap += 1;
        }
    }
    (overlap, cg.len(), grams(reference).len())
}

/// LCS length from the full quadratic table.
pub fn oracle_lcs(a: &[String], b: &[String]) -> usize {
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            t[i][j] = if a[i - 1] == b[j - 1] { t[i - 1][j - 1] + 1 } else { t[i - 1][j].max(t[i][j - 1]) };
        }
    }
    t[a.len()][b.len()]
}

/// (precision, recall, f1) from overlap counts.
pub fn oracle_prf(overlap: usize, c: usize, r: usize) -> (f64, f64, f64) {
    if c == 0 || r == 0 {
        return (0.0, 0.0, 0.0);
    }
    let p = overlap as f64 / c as f64;
    let rc = overlap as f64 / r as f64;
    let f = if p + rc > 0.0 { 2.0 * p * rc / (p + rc) } else { 0.0 };
    (p, rc, f)
}

pub const TURKISH_VOCAB: [&str; 16] = [
    "kedi", "evde", "uyur", "çocuk", "okula", "gider", "ağaç", "yeşil", "ışık", "şehir", "güzel", "iğne", "ördek",
    "üzüm", "bir", "ve",
];

/// Boundary keyword suite: expected rejection rule, or `None` for accept.
pub fn keyword_golden() -> Vec<(&'static str, Option<RejectRule>)> {
    use RejectRule::*;
    vec![
        // length 2 and 3
        ("ev", Some(TooShort)),
        ("su", Some(TooShort)),
        ("aş", Some(TooShort)),
        ("öz", Some(TooShort)),
        ("İz", Some(TooShort)),
        ("ağ", Some(TooShort)),
        ("arı", None),
        ("göz", None),
        ("çay", None),
        ("ılık", None),
        ("iğe", None),
        ("şiş", None),
        ("ÜÇE", None),
        // length 20 and 21
        ("abcçdefgğhıijklmnoöp", None),
        ("ÇĞİIÖŞÜçğıiöşüabcdef", None),
        ("kahramanmaraşlılarda", None),
        ("öğretmenlerimizdendi", None),
        ("abcçdefgğhıijklmnoöpr", Some(TooLong)),
        ("kahramanmaraşlılardan", Some(TooLong)),
        ("ÇĞİIÖŞÜçğıiöşüabcdefg", Some(TooLong)),
        // digits
        ("covid19", Some(NonAlphabet)),
        ("covid-19", Some(NonAlphabet)),
        ("1923", Some(NonAlphabet)),
        ("a1b", Some(NonAlphabet)),
        ("kale2", Some(NonAlphabet)),
        ("٣kedi", Some(NonAlphabet)),
        // punctuation and symbols
        ("ankara'nın", Some(NonAlphabet)),
        ("çay-kahve", Some(NonAlphabet)),
        ("kedi.", Some(NonAlphabet)),
        ("soru?", Some(NonAlphabet)),
        ("e-posta", Some(NonAlphabet)),
        ("a&b&c", Some(NonAlphabet)),
        ("kitap_lar", Some(NonAlphabet)),
        ("(ankara)", Some(NonAlphabet)),
        ("#etiket", Some(NonAlphabet)),
        // Latin letters outside the alphabet
        ("wifi", Some(NonAlphabet)),
        ("taksi", None),
        ("xenon", Some(NonAlphabet)),
        ("quiz", Some(NonAlphabet)),
        // Turkish letters
        ("çiçek", None),
        ("İstanbul", None),
        ("ırmak", None),
        ("ÖRDEK", None),
        ("şeker", None),
        ("üzüm", None),
        ("ÇĞİIÖŞÜ", None),
        // accents fold, spaces join, empties
        ("kâğıt", None),
        ("Ağrı Dağı", None),
        ("   ", Some(Empty)),
        ("", Some(Empty)),
    ]
}
