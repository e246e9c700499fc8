//! Roman domination numbers of cylinders `P_m □ C_n`.
//!
//! A cylinder column is encoded as a word over `{a, b, c, d}` (the letters
//! classify how each vertex participates in a Roman dominating function);
//! consecutive columns are constrained by can-follow rules, and the weight of
//! a function becomes the label sum of a closed path in a digraph over those
//! words. The minimum over the diagonal of the `n`-th (min,+) power of the
//! digraph's transfer matrix is exactly `γ_R(P_m □ C_n)`.
//!
//! On top of that correspondence the crate provides:
//! - exact `γ_R` queries for fixed `(m, n)`,
//! - detection of the shift recurrence `A^{n0+α} = β ⊗ A^{n0}` among cached
//!   powers, which turns into closed formulas in `n`,
//! - the border/loss variant of the transfer matrix that certifies the lower
//!   bound `⌈2(m+1)n/5⌉` for large cylinders,
//! - independent ground-truth oracles (exhaustive search and a column DP on
//!   the explicit cylinder graph) that share no code with the word pipeline.

mod cache;
mod error;
mod formula;
pub mod oracle;
mod solver;
mod transitions;
mod words;

pub use cache::{CacheKey, DiskPowerCache, MemoryPowerStore, PowerStore, StoreMetrics};
pub use error::CylinderError;
pub use formula::{CeilingForm, RomanFormula};
pub use solver::{
    find_recurrence, find_recurrence_with_store, lower_bound, min_diagonal, roman_number,
    solve_formula, verify_loss_lemma, LossReport, LossRow, Metrics, Recurrence, RecurrenceResult,
};
pub use transitions::{
    arc_label, build_transfer_matrix, can_follow, estimated_matrix_bytes, newly_dominated,
    ArcLabeler, TransitionRules, MAX_STANDARD_ROWS, MIN_ROWS,
};
pub use words::{count_words, generate_words, ColumnWord, Letter, WordTable};

/// Which rule system a word table or transfer matrix follows.
///
/// `Standard` models Roman domination on the full cylinder; `Border` models
/// the relaxed fourth row of a 4-row border block together with the
/// loss-counting arc labels.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Standard,
    Border,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Border => "border",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
