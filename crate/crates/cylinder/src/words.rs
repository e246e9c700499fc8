//! Column words and their enumeration.
//!
//! Each cylinder column is a word over `{a, b, c, d}`: `a` marks a vertex of
//! value 2, `b` a vertex of value 1, `c` a 0-vertex already dominated from
//! its own column or the previous one, and `d` a 0-vertex whose domination is
//! still pending. A word is *correct* when none of the adjacent letter pairs
//! `ad, da, ab, ba, bb` occurs.

use std::collections::HashMap;

use crate::{CylinderError, Variant};

/// One of the four column labels, ordered `a < b < c < d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            _ => None,
        }
    }

    fn from_code(code: u32) -> Letter {
        match code & 0b11 {
            0 => Letter::A,
            1 => Letter::B,
            2 => Letter::C,
            _ => Letter::D,
        }
    }
}

/// Adjacent pairs that a correct word must not contain.
const FORBIDDEN_PAIRS: [(Letter, Letter); 5] = [
    (Letter::A, Letter::D),
    (Letter::D, Letter::A),
    (Letter::A, Letter::B),
    (Letter::B, Letter::A),
    (Letter::B, Letter::B),
];

pub(crate) fn pair_allowed(x: Letter, y: Letter) -> bool {
    !FORBIDDEN_PAIRS.contains(&(x, y))
}

/// Longest word representable in the packed 2-bit encoding.
const MAX_LEN: usize = 16;

/// A fixed-length word over `{a, b, c, d}`, packed two bits per letter with
/// the first letter in the most significant position, so that the numeric
/// order of `packed` equals lexicographic order of equal-length words.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnWord {
    len: u8,
    packed: u32,
}

impl ColumnWord {
    pub fn from_letters(letters: &[Letter]) -> Result<Self, CylinderError> {
        if letters.is_empty() || letters.len() > MAX_LEN {
            return Err(CylinderError::invalid(format!(
                "word length must be in 1..={MAX_LEN}, got {}",
                letters.len()
            )));
        }
        let mut packed = 0u32;
        for &l in letters {
            packed = (packed << 2) | l as u32;
        }
        Ok(ColumnWord { len: letters.len() as u8, packed })
    }

    /// Parses a string like `"acca"`.
    pub fn parse(s: &str) -> Result<Self, CylinderError> {
        let letters = s
            .chars()
            .map(|c| {
                Letter::from_char(c)
                    .ok_or_else(|| CylinderError::invalid(format!("invalid letter {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_letters(&letters)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at `row` (0-based from the top of the column).
    pub fn letter(&self, row: usize) -> Letter {
        debug_assert!(row < self.len());
        let shift = 2 * (self.len() - 1 - row);
        Letter::from_code(self.packed >> shift)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    /// Word with the row order flipped top-to-bottom.
    pub fn reversed(&self) -> ColumnWord {
        let letters: Vec<Letter> = self.letters().collect();
        let rev: Vec<Letter> = letters.into_iter().rev().collect();
        ColumnWord::from_letters(&rev).expect("same length")
    }

    pub fn is_correct(&self) -> bool {
        (1..self.len()).all(|i| pair_allowed(self.letter(i - 1), self.letter(i)))
    }

    /// Counts of the letters `a` and `b`, i.e. the number of 2-valued and
    /// 1-valued vertices in the column.
    pub fn letter_counts(&self) -> (u32, u32) {
        let mut count_a = 0;
        let mut count_b = 0;
        for l in self.letters() {
            match l {
                Letter::A => count_a += 1,
                Letter::B => count_b += 1,
                _ => {}
            }
        }
        (count_a, count_b)
    }

    pub(crate) fn packed(&self) -> u32 {
        self.packed
    }
}

impl std::fmt::Display for ColumnWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for ColumnWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// All correct words of one length, sorted lexicographically, with an inverse
/// index. Immutable after construction.
pub struct WordTable {
    length: usize,
    variant: Variant,
    words: Vec<ColumnWord>,
    index: HashMap<u32, u32>,
}

impl WordTable {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Word length (the number of cylinder rows it covers).
    pub fn word_length(&self) -> usize {
        self.length
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn words(&self) -> &[ColumnWord] {
        &self.words
    }

    pub fn word(&self, idx: usize) -> ColumnWord {
        self.words[idx]
    }

    pub fn position(&self, word: &ColumnWord) -> Option<usize> {
        if word.len() != self.length {
            return None;
        }
        self.index.get(&word.packed()).map(|&i| i as usize)
    }
}

/// The number of cylinder rows the Border variant covers (the four border
/// rows of a tall cylinder).
pub const BORDER_ROWS: usize = 4;

/// Enumerates all correct words for `m` rows in lexicographic order.
///
/// The Border variant always describes a 4-row block, so it requires `m == 4`
/// and produces the same word set as the standard 4-row table (only the
/// can-follow rules differ between the variants).
pub fn generate_words(m: usize, variant: Variant) -> Result<WordTable, CylinderError> {
    match variant {
        Variant::Standard => {
            if m < 2 {
                return Err(CylinderError::invalid(format!("need at least 2 rows, got {m}")));
            }
        }
        Variant::Border => {
            if m != BORDER_ROWS {
                return Err(CylinderError::invalid(format!(
                    "border variant is defined on {BORDER_ROWS} rows, got {m}"
                )));
            }
        }
    }
    if m > MAX_LEN {
        return Err(CylinderError::invalid(format!("word length {m} exceeds supported maximum {MAX_LEN}")));
    }

    // Depth-first extension in letter order yields lexicographic output
    // without sorting.
    let mut words = Vec::new();
    let mut stack: Vec<Letter> = Vec::with_capacity(m);
    extend(&mut stack, m, &mut words);

    let index = words
        .iter()
        .enumerate()
        .map(|(i, w): (usize, &ColumnWord)| (w.packed(), i as u32))
        .collect();
    Ok(WordTable { length: m, variant, words, index })
}

fn extend(prefix: &mut Vec<Letter>, m: usize, out: &mut Vec<ColumnWord>) {
    if prefix.len() == m {
        out.push(ColumnWord::from_letters(prefix).expect("valid length"));
        return;
    }
    for l in Letter::ALL {
        if let Some(&last) = prefix.last() {
            if !pair_allowed(last, l) {
                continue;
            }
        }
        prefix.push(l);
        extend(prefix, m, out);
        prefix.pop();
    }
}

/// Number of correct words of length `m`, via the per-last-letter linear
/// recurrence. Cheap even where full enumeration would not fit in memory.
pub fn count_words(m: usize) -> Option<u128> {
    if m == 0 {
        return None;
    }
    // counts indexed by last letter a, b, c, d
    let mut counts: [u128; 4] = [1, 1, 1, 1];
    for _ in 1..m {
        let mut next = [0u128; 4];
        for (last, &n) in counts.iter().enumerate() {
            for (l, slot) in next.iter_mut().enumerate() {
                if pair_allowed(Letter::from_code(last as u32), Letter::from_code(l as u32)) {
                    *slot = slot.checked_add(n)?;
                }
            }
        }
        counts = next;
    }
    counts.iter().try_fold(0u128, |acc, &n| acc.checked_add(n))
}
