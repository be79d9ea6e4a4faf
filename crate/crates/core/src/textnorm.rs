//! Turkish-aware casing, alphabet validation and word tokenization.
//!
//! Grid letters are the 29 uppercase letters of the Turkish alphabet. The
//! standard library's case mapping is locale-free, so `i`/`ı`/`İ`/`I` are
//! mapped by hand before falling back to `char::to_uppercase`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// The Turkish alphabet in collation order.
pub const TURKISH_ALPHABET: [char; 29] = [
    'A', 'B', 'C', 'Ç', 'D', 'E', 'F', 'G', 'Ğ', 'H', 'I', 'İ', 'J', 'K', 'L', 'M', 'N', 'O', 'Ö',
    'P', 'R', 'S', 'Ş', 'T', 'U', 'Ü', 'V', 'Y', 'Z',
];

/// Returns `true` for the 29 uppercase grid letters.
pub fn is_grid_letter(c: char) -> bool {
    matches!(
        c,
        'A'..='H' | 'J'..='P' | 'R'..='V' | 'Y' | 'Z' | 'I' | 'İ' | 'Ç' | 'Ğ' | 'Ö' | 'Ş' | 'Ü'
    )
}

/// Position of `c` in the alphabet, if it is a grid letter.
pub fn alphabet_index(c: char) -> Option<usize> {
    TURKISH_ALPHABET.iter().position(|&l| l == c)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("empty input")]
    Empty,
    /// `position` is the char index in the NFC-composed input.
    #[error("character {ch:?} at position {position} is not a Turkish grid letter")]
    NonAlphabetCharacter { position: usize, ch: char },
}

/// Turkish uppercase of a single character.
pub fn upper_tr(c: char) -> impl Iterator<Item = char> {
    let special = match c {
        'i' => Some('İ'),
        'ı' => Some('I'),
        _ => None,
    };
    let rest = if special.is_some() { None } else { Some(c.to_uppercase()) };
    special.into_iter().chain(rest.into_iter().flatten())
}

/// Turkish lowercase of a single character.
pub fn lower_tr(c: char) -> impl Iterator<Item = char> {
    let special = match c {
        'İ' => Some('i'),
        'I' => Some('ı'),
        _ => None,
    };
    let rest = if special.is_some() { None } else { Some(c.to_lowercase()) };
    special.into_iter().chain(rest.into_iter().flatten())
}

pub fn to_upper_tr(s: &str) -> String {
    s.chars().flat_map(upper_tr).collect()
}

pub fn to_lower_tr(s: &str) -> String {
    s.chars().flat_map(lower_tr).collect()
}

/// Maps an uppercase accented Latin letter outside the alphabet to its base
/// grid letter. Circumflexed `Î` keeps the dot of Turkish `i`.
fn fold_accent(c: char) -> Option<char> {
    if c == 'Î' {
        return Some('İ');
    }
    let mut parts = std::iter::once(c).nfd();
    let base = parts.next()?;
    if !base.is_ascii_uppercase() {
        return None;
    }
    // Only combining marks may follow the base letter.
    if parts.any(|m| !is_combining_mark(m)) {
        return None;
    }
    Some(base)
}

fn is_combining_mark(c: char) -> bool {
    matches!(c as u32, 0x0300..=0x036F)
}

/// An uppercase word over the Turkish alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedWord {
    text: String,
    len: usize,
}

impl NormalizedWord {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Number of letters (not bytes).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.text.chars()
    }

    pub fn letter_vec(&self) -> Vec<char> {
        self.text.chars().collect()
    }
}

impl fmt::Display for NormalizedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl TryFrom<&str> for NormalizedWord {
    type Error = NormError;

    fn try_from(raw: &str) -> Result<Self, Self::Error> {
        to_grid_form(raw)
    }
}

impl Serialize for NormalizedWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for NormalizedWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        to_grid_form(&raw).map_err(serde::de::Error::custom)
    }
}

/// Canonical grid form of `raw`: NFC, Turkish uppercase, accent folding, then
/// alphabet validation. Whitespace, digits and punctuation are rejected.
pub fn to_grid_form(raw: &str) -> Result<NormalizedWord, NormError> {
    if raw.is_empty() {
        return Err(NormError::Empty);
    }
    let mut text = String::with_capacity(raw.len());
    let mut len = 0;
    for (position, ch) in raw.nfc().enumerate() {
        for up in upper_tr(ch) {
            let letter = if is_grid_letter(up) {
                up
            } else {
                match fold_accent(up) {
                    Some(base) if is_grid_letter(base) => base,
                    _ => return Err(NormError::NonAlphabetCharacter { position, ch }),
                }
            };
            text.push(letter);
            len += 1;
        }
    }
    Ok(NormalizedWord { text, len })
}

/// Like [`to_grid_form`] but first removes whitespace, for multi-word answers.
pub fn to_grid_form_joined(raw: &str) -> Result<NormalizedWord, NormError> {
    let joined: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    to_grid_form(&joined)
}

/// Turkish-uppercased, accent-folded rendering of free text in which every
/// non-letter becomes a single space. Used for answer containment checks.
pub fn letter_skeleton(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.nfc() {
        for up in upper_tr(ch) {
            let letter = if is_grid_letter(up) {
                Some(up)
            } else {
                fold_accent(up).filter(|&b| is_grid_letter(b))
            };
            match letter {
                Some(l) => out.push(l),
                None => {
                    if !out.ends_with(' ') {
                        out.push(' ');
                    }
                }
            }
        }
    }
    out
}

/// Whether `text` contains `word` once both are reduced to grid letters.
pub fn contains_word(text: &str, word: &NormalizedWord) -> bool {
    letter_skeleton(text).contains(word.as_str())
}

/// Whitespace tokenization with edge punctuation stripped and Turkish
/// lowercasing applied.
pub fn tokenize_words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let lowered = to_lower_tr(raw);
            let token = lowered.trim_matches(|c: char| !c.is_alphanumeric());
            (!token.is_empty()).then(|| token.to_string())
        })
        .collect()
}

pub fn word_count(text: &str) -> usize {
    tokenize_words(text).len()
}
