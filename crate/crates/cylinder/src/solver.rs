//! Top-level algorithms: exact `γ_R` queries, the shift-recurrence search
//! over cached powers, the closed-form assembly, the general lower bound,
//! and the border-loss verification pipeline.

use std::sync::Arc;
use std::time::{Duration, Instant};

use tropical::{shift_difference, TropMatrix, TropicalValue};

use crate::cache::{MemoryPowerStore, PowerStore};
use crate::formula::RomanFormula;
use crate::transitions::build_transfer_matrix;
use crate::{CylinderError, Variant};

/// Compute/serialize/store breakdown of a solver run.
#[derive(Copy, Clone, Debug, Default)]
pub struct Metrics {
    /// Number of (min,+) matrix products performed.
    pub products: u64,
    /// Time spent inside the product kernel.
    pub kernel: Duration,
    /// Time spent encoding/decoding matrices.
    pub serialize: Duration,
    /// Time spent on cache file I/O.
    pub io: Duration,
}

impl Metrics {
    pub(crate) fn absorb_store(&mut self, store: &dyn PowerStore) {
        let sm = store.metrics();
        self.serialize = sm.serialize;
        self.io = sm.io;
    }
}

/// A certified shift recurrence `A^{n0+alpha} = beta ⊗ A^{n0}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub n0: u32,
    pub alpha: u32,
    pub beta: i32,
}

/// Outcome of the recurrence search up to `K`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceResult {
    pub recurrence: Option<Recurrence>,
    pub k_searched: u32,
}

impl RecurrenceResult {
    pub fn found(&self) -> bool {
        self.recurrence.is_some()
    }
}

/// Minimum over the diagonal of a matrix; `∞` when the diagonal is all `∞`.
pub fn min_diagonal(matrix: &TropMatrix) -> TropicalValue {
    matrix.min_diagonal()
}

/// Makes powers `A^1..=A^k` of `base` available in `store`, multiplying only
/// the missing ones. Returns the running power `A^k`.
fn ensure_powers(
    base: &TropMatrix,
    k_max: u32,
    store: &mut dyn PowerStore,
    metrics: &mut Metrics,
) -> Result<Arc<TropMatrix>, CylinderError> {
    let mut current = match store.get(1)? {
        Some(found) => found,
        None => store.put(1, base.clone())?,
    };
    for k in 2..=k_max {
        if let Some(found) = store.get(k)? {
            current = found;
            continue;
        }
        let start = Instant::now();
        let next = base.trop_mul(&current)?;
        metrics.kernel += start.elapsed();
        metrics.products += 1;
        current = store.put(k, next)?;
    }
    Ok(current)
}

/// Exact `γ_R(P_m □ C_n)`: the minimum diagonal entry of the `n`-th (min,+)
/// power of the standard transfer matrix.
pub fn roman_number(m: usize, n: usize) -> Result<u64, CylinderError> {
    roman_number_with_metrics(m, n, &mut Metrics::default())
}

pub fn roman_number_with_metrics(m: usize, n: usize, metrics: &mut Metrics) -> Result<u64, CylinderError> {
    if n < 3 {
        return Err(CylinderError::invalid(format!("cycle needs at least 3 columns, got {n}")));
    }
    let (_, matrix) = build_transfer_matrix(m, Variant::Standard)?;
    let start = Instant::now();
    let power = matrix.trop_pow(n as u64)?;
    metrics.kernel += start.elapsed();
    metrics.products += (64 - (n as u64).leading_zeros() as u64) + (n as u64).count_ones() as u64 - 2;
    match min_diagonal(&power).as_finite() {
        Some(v) if v >= 0 => Ok(v as u64),
        Some(v) => Err(CylinderError::invalid(format!("negative weight {v} from standard labels"))),
        None => Err(CylinderError::invalid(format!(
            "no closed column sequence of length {n}; the transfer digraph is broken"
        ))),
    }
}

/// Searches the cached powers for the minimal shift recurrence: smallest
/// `alpha`, then smallest `n0`, with `n0 + alpha <= k`.
pub fn find_recurrence_with_store(
    base: &TropMatrix,
    k: u32,
    store: &mut dyn PowerStore,
    metrics: &mut Metrics,
) -> Result<RecurrenceResult, CylinderError> {
    if k < 2 {
        return Err(CylinderError::invalid(format!("recurrence search needs K >= 2, got {k}")));
    }
    ensure_powers(base, k, store, metrics)?;
    for alpha in 1..k {
        for n0 in 1..=(k - alpha) {
            let shifted = store.get(n0 + alpha)?.expect("power ensured");
            let original = store.get(n0)?.expect("power ensured");
            if let Some(beta) = shift_difference(&shifted, &original)? {
                metrics.absorb_store(store);
                return Ok(RecurrenceResult {
                    recurrence: Some(Recurrence { n0, alpha, beta }),
                    k_searched: k,
                });
            }
        }
    }
    metrics.absorb_store(store);
    Ok(RecurrenceResult { recurrence: None, k_searched: k })
}

/// In-memory convenience wrapper around `find_recurrence_with_store`.
pub fn find_recurrence(base: &TropMatrix, k: u32) -> Result<RecurrenceResult, CylinderError> {
    let mut store = MemoryPowerStore::default();
    find_recurrence_with_store(base, k, &mut store, &mut Metrics::default())
}

/// Solves the finite difference equation behind a found recurrence into a
/// closed form: exact boundary values for `3 <= n < n0 + alpha` read off the
/// cached powers, extended by `beta` steps of size `alpha`.
pub fn solve_formula(
    m: usize,
    result: &RecurrenceResult,
    store: &mut dyn PowerStore,
) -> Result<RomanFormula, CylinderError> {
    let recurrence = result
        .recurrence
        .ok_or_else(|| CylinderError::invalid("cannot solve a formula without a recurrence"))?;
    let mut base_values = Vec::new();
    for n in 3..recurrence.n0 + recurrence.alpha {
        let power = store
            .get(n)?
            .ok_or_else(|| CylinderError::invalid(format!("power {n} missing from the store")))?;
        let value = min_diagonal(&power)
            .as_finite()
            .ok_or_else(|| CylinderError::invalid(format!("no closed sequence of length {n}")))?;
        base_values.push((n, value as i64));
    }
    RomanFormula::assemble(m, recurrence, base_values)
}

/// The general lower bound `⌈2(m+1)n/5⌉`, exact integer arithmetic. The
/// bound is guaranteed for `m, n >= 10` and is attained whenever
/// `m, n >= 4` with `n ≡ 0 (mod 5)`.
pub fn lower_bound(m: u64, n: u64) -> u64 {
    let numerator = 2 * (m + 1) * n;
    numerator.div_ceil(5)
}

/// One row of the border-loss verification: the doubled minimum loss
/// `2·L_a(n)` of an almost Roman dominating border block with `n` columns.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LossRow {
    pub n: u32,
    pub doubled_min_loss: i64,
    pub matches_n: bool,
}

/// Outcome of the loss pipeline over a range of `n`.
#[derive(Clone, Debug)]
pub struct LossReport {
    pub rows: Vec<LossRow>,
    pub recurrence: RecurrenceResult,
    pub all_match: bool,
}

/// Runs the border pipeline: for every `n` in `[n_lo, n_hi]` computes the
/// doubled minimum loss from the border transfer matrix's `n`-th power and
/// compares it against `n`, then searches the recurrence up to `k`.
pub fn verify_loss_lemma(n_lo: u32, n_hi: u32, k: u32) -> Result<LossReport, CylinderError> {
    verify_loss_lemma_with_metrics(n_lo, n_hi, k, &mut Metrics::default())
}

pub fn verify_loss_lemma_with_metrics(
    n_lo: u32,
    n_hi: u32,
    k: u32,
    metrics: &mut Metrics,
) -> Result<LossReport, CylinderError> {
    if n_lo < 10 || n_lo > n_hi {
        return Err(CylinderError::invalid(format!(
            "loss verification needs 10 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]"
        )));
    }
    let (_, border) = build_transfer_matrix(4, Variant::Border)?;
    let mut store = MemoryPowerStore::default();
    let k_eff = k.max(n_hi);
    ensure_powers(&border, k_eff, &mut store, metrics)?;

    let mut rows = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    for n in n_lo..=n_hi {
        let power = store.get(n)?.expect("power ensured");
        let doubled = min_diagonal(&power)
            .as_finite()
            .ok_or_else(|| CylinderError::invalid(format!("no closed border sequence of length {n}")))?
            as i64;
        rows.push(LossRow { n, doubled_min_loss: doubled, matches_n: doubled == n as i64 });
    }
    let recurrence = find_recurrence_with_store(&border, k, &mut store, metrics)?;
    let all_match = rows.iter().all(|r| r.matches_n);
    Ok(LossReport { rows, recurrence, all_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_gamma_r, OracleMode};

    #[test]
    fn min_diagonal_cases() {
        let id = TropMatrix::identity(3).unwrap();
        assert_eq!(min_diagonal(&id), TropicalValue::ZERO);
        let all_inf = TropMatrix::from_fn(2, |_, _| TropicalValue::INFINITY).unwrap();
        assert_eq!(min_diagonal(&all_inf), TropicalValue::INFINITY);
    }

    #[test]
    fn roman_number_matches_exhaustive_oracle_for_tiny_cylinders() {
        assert_eq!(roman_number(2, 3).unwrap(), 4);
        assert_eq!(
            roman_number(2, 3).unwrap(),
            brute_force_gamma_r(2, 3, OracleMode::Exhaustive).unwrap()
        );
        assert_eq!(
            roman_number(3, 4).unwrap(),
            brute_force_gamma_r(3, 4, OracleMode::Exhaustive).unwrap()
        );
    }

    #[test]
    fn diagonal_of_sixth_power_equals_oracle_weight() {
        // The m = 2 transfer matrix raised to the 6th power against the
        // exhaustive search on P_2 x C_6.
        let (_, matrix) = build_transfer_matrix(2, Variant::Standard).unwrap();
        let mut store = MemoryPowerStore::default();
        let mut metrics = Metrics::default();
        ensure_powers(&matrix, 6, &mut store, &mut metrics).unwrap();
        let sixth = store.get(6).unwrap().unwrap();
        let expected = brute_force_gamma_r(2, 6, OracleMode::Exhaustive).unwrap();
        assert_eq!(min_diagonal(&sixth).as_finite(), Some(expected as i32));
    }

    #[test]
    fn roman_number_rejects_short_cycles() {
        assert!(roman_number(2, 2).is_err());
        assert!(roman_number(3, 0).is_err());
    }

    #[test]
    fn recurrence_for_two_rows() {
        let (_, matrix) = build_transfer_matrix(2, Variant::Standard).unwrap();
        let result = find_recurrence(&matrix, 50).unwrap();
        assert_eq!(result.recurrence, Some(Recurrence { n0: 6, alpha: 4, beta: 4 }));
        assert_eq!(result.k_searched, 50);
    }

    #[test]
    fn truncated_search_reports_not_found() {
        // With K = 5 the m = 2 recurrence (n0 = 6) is out of reach.
        let (_, matrix) = build_transfer_matrix(2, Variant::Standard).unwrap();
        let result = find_recurrence(&matrix, 5).unwrap();
        assert_eq!(result.recurrence, None);
        assert!(find_recurrence(&matrix, 1).is_err());
    }

    #[test]
    fn shift_stays_valid_beyond_its_base_point() {
        let (_, matrix) = build_transfer_matrix(2, Variant::Standard).unwrap();
        let mut store = MemoryPowerStore::default();
        let mut metrics = Metrics::default();
        ensure_powers(&matrix, 20, &mut store, &mut metrics).unwrap();
        for n in 6..=16u32 {
            let shifted = store.get(n + 4).unwrap().unwrap();
            let original = store.get(n).unwrap().unwrap();
            assert_eq!(shift_difference(&shifted, &original).unwrap(), Some(4), "n = {n}");
        }
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound(10, 10), 44);
        assert_eq!(lower_bound(10, 11), 49);
        assert_eq!(lower_bound(7, 5), 16);
        assert_eq!(lower_bound(15, 13), 84);
    }

    #[test]
    fn loss_preconditions() {
        assert!(verify_loss_lemma(9, 12, 50).is_err());
        assert!(verify_loss_lemma(12, 11, 50).is_err());
    }

    #[test]
    fn power_count_in_roman_number_metrics() {
        let mut metrics = Metrics::default();
        roman_number_with_metrics(2, 8, &mut metrics).unwrap();
        // 8 = 2^3 needs three squarings.
        assert_eq!(metrics.products, 3);
    }
}
