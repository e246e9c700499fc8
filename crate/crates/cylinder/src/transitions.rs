//! Can-follow rules between consecutive column words, arc labels, and the
//! transfer matrix built from them.
//!
//! A pair `(q, p)` of correct words is an arc when column `p` may appear
//! immediately after column `q` in some valid labeling. The rules are
//! row-local: each row constrains `p_i` given `q_i`, with a one-row look at
//! `p`'s vertical neighbors (a 0-vertex marked `c` must actually be
//! dominated, and a `d` in `q` has its last chance to be dominated by `p`).

use rayon::prelude::*;
use tropical::{TropMatrix, TropicalValue};

use crate::words::{generate_words, ColumnWord, Letter, WordTable};
use crate::{CylinderError, Variant};

/// Smallest supported row count for the standard transfer matrix.
pub const MIN_ROWS: usize = 2;
/// Largest row count for which the dense standard transfer matrix is
/// reasonably storable (the 12-row matrix would already exceed half a
/// terabyte).
pub const MAX_STANDARD_ROWS: usize = 11;

/// The can-follow rule system of one variant.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TransitionRules {
    pub variant: Variant,
    pub m: usize,
}

impl TransitionRules {
    pub fn new(variant: Variant, m: usize) -> Result<Self, CylinderError> {
        match variant {
            Variant::Standard if m >= MIN_ROWS => Ok(TransitionRules { variant, m }),
            Variant::Border if m == 4 => Ok(TransitionRules { variant, m }),
            _ => Err(CylinderError::invalid(format!("no {variant} rules for {m} rows"))),
        }
    }
}

/// Arc labeling of one variant.
///
/// Standard arcs carry the weight contributed by the successor column,
/// `2·p(a) + p(b)`. Border arcs carry the doubled-loss contribution
/// `10·p(a) + 5·p(b) − 2·nd(q, p)`, which may be negative.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ArcLabeler {
    pub variant: Variant,
}

/// True when `p` may follow `q` under the given rules.
pub fn can_follow(q: &ColumnWord, p: &ColumnWord, rules: &TransitionRules) -> Result<bool, CylinderError> {
    if q.len() != rules.m || p.len() != rules.m {
        return Err(CylinderError::invalid(format!(
            "word lengths {} and {} do not match the {}-row rules",
            q.len(),
            p.len(),
            rules.m
        )));
    }
    Ok(can_follow_unchecked(q, p, rules))
}

fn can_follow_unchecked(q: &ColumnWord, p: &ColumnWord, rules: &TransitionRules) -> bool {
    let m = rules.m;
    for i in 0..m {
        let qi = q.letter(i);
        let pi = p.letter(i);
        // Is some vertical neighbor of row i in p a 2-vertex?
        let above = i > 0 && p.letter(i - 1) == Letter::A;
        let below = i + 1 < m && p.letter(i + 1) == Letter::A;
        let vertical_two = above || below;

        let relaxed_last = rules.variant == Variant::Border && i == m - 1;
        let ok = match qi {
            // A 2-column vertex dominates its right neighbor, which is
            // therefore a or c.
            Letter::A => pi == Letter::A || pi == Letter::C,
            // After a 1-vertex, a 0-vertex is either dominated vertically
            // (c) or still pending (d).
            Letter::B => (pi == Letter::C && vertical_two) || pi == Letter::D,
            // After a dominated 0-vertex anything goes, but a c must again
            // be justified vertically.
            Letter::C => {
                pi == Letter::A
                    || pi == Letter::B
                    || pi == Letter::D
                    || (pi == Letter::C && vertical_two)
            }
            // A pending 0-vertex must be dominated now — except in the
            // border block's last row, where domination may come from the
            // row below the block.
            Letter::D => {
                if relaxed_last {
                    pi == Letter::A
                        || pi == Letter::B
                        || pi == Letter::D
                        || (pi == Letter::C && vertical_two)
                } else {
                    pi == Letter::A
                }
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Number of vertices newly dominated by column `p` given predecessor `q`,
/// for the 4-row border block. Counts, per row, the vertices whose
/// domination is established exactly when `p` is placed, plus the vertex
/// below the block when `p`'s last row is a 2-vertex.
pub fn newly_dominated(q: &ColumnWord, p: &ColumnWord) -> Result<u32, CylinderError> {
    let rules = TransitionRules::new(Variant::Border, 4)?;
    if q.len() != 4 || p.len() != 4 {
        return Err(CylinderError::invalid("newly_dominated needs 4-row words"));
    }
    if !can_follow_unchecked(q, p, &rules) {
        return Err(CylinderError::invalid(format!("({q}, {p}) is not a border arc")));
    }
    let mut nd = 0;
    for i in 0..4 {
        nd += match (q.letter(i), p.letter(i)) {
            (Letter::A, Letter::A) => 1,
            (Letter::B, Letter::C) => 1,
            (Letter::C, Letter::A) => 2,
            (Letter::C | Letter::D, Letter::B | Letter::C) => 1,
            (Letter::D, Letter::A) => 3,
            _ => 0,
        };
    }
    if p.letter(3) == Letter::A {
        nd += 1;
    }
    Ok(nd)
}

/// Label of the arc `(q, p)`; fails when the pair is not an arc of the
/// labeler's variant.
pub fn arc_label(q: &ColumnWord, p: &ColumnWord, labeler: &ArcLabeler) -> Result<TropicalValue, CylinderError> {
    let rules = TransitionRules::new(labeler.variant, q.len())?;
    if !can_follow(q, p, &rules)? {
        return Err(CylinderError::invalid(format!(
            "({q}, {p}) is not an arc under the {} rules",
            labeler.variant
        )));
    }
    let (count_a, count_b) = p.letter_counts();
    let label = match labeler.variant {
        Variant::Standard => 2 * count_a as i32 + count_b as i32,
        Variant::Border => {
            let nd = newly_dominated(q, p)?;
            10 * count_a as i32 + 5 * count_b as i32 - 2 * nd as i32
        }
    };
    Ok(TropicalValue::fin(label))
}

/// Estimated dense storage for the standard transfer matrix of `m` rows,
/// at four bytes per entry.
pub fn estimated_matrix_bytes(m: usize) -> Option<u128> {
    let dim = crate::words::count_words(m)?;
    dim.checked_mul(dim)?.checked_mul(4)
}

/// Builds the transfer matrix of the chosen variant: entry `[q][p]` is the
/// arc label when `p` can follow `q`, `∞` otherwise. Rows index the
/// predecessor word, columns the successor, both in the word table's
/// lexicographic order.
pub fn build_transfer_matrix(m: usize, variant: Variant) -> Result<(WordTable, TropMatrix), CylinderError> {
    if variant == Variant::Standard && m > MAX_STANDARD_ROWS {
        let required = estimated_matrix_bytes(m).unwrap_or(u128::MAX);
        return Err(CylinderError::Capacity {
            what: format!("transfer matrix for {m} rows"),
            required_bytes: required,
        });
    }
    let table = generate_words(m, variant)?;
    let rules = TransitionRules::new(variant, m)?;
    let labeler = ArcLabeler { variant };
    let dim = table.len();

    // Standard labels depend on the successor only; precompute per word.
    let standard_labels: Vec<i32> = table
        .words()
        .iter()
        .map(|w| {
            let (a, b) = w.letter_counts();
            2 * a as i32 + b as i32
        })
        .collect();

    let mut entries = vec![TropicalValue::INFINITY; dim * dim];
    entries
        .par_chunks_mut(dim)
        .enumerate()
        .for_each(|(qi, row)| {
            let q = table.word(qi);
            for (pi, slot) in row.iter_mut().enumerate() {
                let p = table.word(pi);
                if can_follow_unchecked(&q, &p, &rules) {
                    *slot = match labeler.variant {
                        Variant::Standard => TropicalValue::fin(standard_labels[pi]),
                        Variant::Border => arc_label(&q, &p, &labeler).expect("checked arc"),
                    };
                }
            }
        });

    let matrix = TropMatrix::from_entries(dim, entries)?;
    Ok((table, matrix))
}
