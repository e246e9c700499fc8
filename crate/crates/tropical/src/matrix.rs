use rayon::prelude::*;

use crate::value::INF_REPR;
use crate::{TropicalError, TropicalValue};

/// Square dense matrix over the (min,+) semiring, row-major.
///
/// Values are immutable in spirit: every operation returns a fresh matrix,
/// and a `TropMatrix` can be shared read-only across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct TropMatrix {
    dim: usize,
    entries: Vec<TropicalValue>,
}

/// Remapped sentinel used by the branch-free product kernel. Chosen so that
/// `BIG + BIG` still fits in `i32` and `BIG` dwarfs every admissible finite
/// sum (see `fast_bound`).
const BIG: i32 = i32::MAX / 2;

impl TropMatrix {
    /// Builds a matrix from row-major entries. `dim` must be positive and
    /// `entries.len()` must equal `dim * dim`.
    pub fn from_entries(dim: usize, entries: Vec<TropicalValue>) -> Result<Self, TropicalError> {
        if dim == 0 {
            return Err(TropicalError::EmptyMatrix);
        }
        let expected = dim * dim;
        if entries.len() != expected {
            return Err(TropicalError::BadEntryCount { expected, got: entries.len() });
        }
        Ok(TropMatrix { dim, entries })
    }

    /// Builds a matrix by evaluating `f(row, col)` for every position.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> TropicalValue) -> Result<Self, TropicalError> {
        if dim == 0 {
            return Err(TropicalError::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Ok(TropMatrix { dim, entries })
    }

    /// The multiplicative identity: 0 on the diagonal, `∞` elsewhere.
    pub fn identity(dim: usize) -> Result<Self, TropicalError> {
        Self::from_fn(dim, |i, j| {
            if i == j {
                TropicalValue::ZERO
            } else {
                TropicalValue::INFINITY
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[TropicalValue] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> TropicalValue {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[TropicalValue] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn count_infinite(&self) -> usize {
        self.entries.iter().filter(|v| v.is_infinite()).count()
    }

    /// Largest absolute finite entry, or `None` if the matrix is all `∞`.
    fn max_abs_finite(&self) -> Option<i32> {
        self.entries
            .iter()
            .filter_map(|v| v.as_finite())
            .map(|w| w.saturating_abs())
            .max()
    }

    /// (min,+) matrix product: `C[i][j] = min_k (A[i][k] + B[k][j])`.
    ///
    /// Output rows are computed in disjoint parallel blocks; the result is
    /// identical for any thread count. Finite sums that leave the 32-bit
    /// range fail with `Overflow` instead of wrapping.
    pub fn trop_mul(&self, rhs: &TropMatrix) -> Result<TropMatrix, TropicalError> {
        if self.dim != rhs.dim {
            return Err(TropicalError::DimMismatch { left: self.dim, right: rhs.dim });
        }
        let bound_a = self.max_abs_finite().unwrap_or(0);
        let bound_b = rhs.max_abs_finite().unwrap_or(0);
        // Fast path precondition: 2*|A| + |B| < BIG keeps every remapped sum
        // below i32 range and keeps finite results separated from sums that
        // involved a sentinel.
        if (bound_a as i64) * 2 + (bound_b as i64) < BIG as i64 {
            Ok(self.mul_fast(rhs, bound_a))
        } else {
            self.mul_checked(rhs)
        }
    }

    /// Branch-free kernel on raw `i32`s. `∞` in the right operand is remapped
    /// to `BIG` so the inner loop is a plain add+min over contiguous rows;
    /// `∞` in the left operand skips the whole `k` term. Any result at least
    /// `BIG - bound_a` must have involved a sentinel and is mapped back to `∞`.
    fn mul_fast(&self, rhs: &TropMatrix, bound_a: i32) -> TropMatrix {
        let n = self.dim;
        let b_mapped: Vec<i32> = rhs
            .entries
            .iter()
            .map(|v| if v.is_infinite() { BIG } else { v.repr() })
            .collect();
        let threshold = BIG - bound_a;

        let mut out = vec![TropicalValue::INFINITY; n * n];
        // Row blocks sized so a block of C plus one tile of B stay cache
        // resident; purely an internal tuning knob.
        const ROW_BLOCK: usize = 16;
        const K_TILE: usize = 64;
        out.par_chunks_mut(ROW_BLOCK * n).enumerate().for_each(|(blk, c_block)| {
            let i0 = blk * ROW_BLOCK;
            let rows = c_block.len() / n;
            let mut acc = vec![i32::MAX; n];
            for r in 0..rows {
                let a_row = self.row(i0 + r);
                acc.fill(i32::MAX);
                let mut k0 = 0;
                while k0 < n {
                    let k1 = (k0 + K_TILE).min(n);
                    for k in k0..k1 {
                        let a_ik = a_row[k].repr();
                        if a_ik == INF_REPR {
                            continue;
                        }
                        let b_row = &b_mapped[k * n..k * n + n];
                        for (c, &b) in acc.iter_mut().zip(b_row) {
                            *c = (*c).min(a_ik + b);
                        }
                    }
                    k0 = k1;
                }
                for (dst, &c) in c_block[r * n..r * n + n].iter_mut().zip(&acc) {
                    if c < threshold {
                        *dst = TropicalValue::from_repr(c);
                    }
                }
            }
        });
        TropMatrix { dim: n, entries: out }
    }

    /// Reference kernel with fully guarded arithmetic. Used when entries are
    /// large enough that the remapping trick could not separate sentinels,
    /// and as an independent oracle in tests.
    pub(crate) fn mul_checked(&self, rhs: &TropMatrix) -> Result<TropMatrix, TropicalError> {
        let n = self.dim;
        let rows: Vec<Vec<TropicalValue>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![TropicalValue::INFINITY; n];
                for k in 0..n {
                    let a_ik = self.get(i, k);
                    if a_ik.is_infinite() {
                        continue;
                    }
                    for (j, out) in row.iter_mut().enumerate() {
                        let term = a_ik.weight_sum(rhs.get(k, j))?;
                        *out = (*out).min(term);
                    }
                }
                Ok(row)
            })
            .collect::<Result<_, TropicalError>>()?;
        let entries = rows.into_iter().flatten().collect();
        Ok(TropMatrix { dim: n, entries })
    }

    /// Scalar (min,+) product: adds `alpha` to every entry. `∞` entries stay
    /// `∞`; an infinite `alpha` yields the all-`∞` matrix.
    pub fn trop_scalar(&self, alpha: TropicalValue) -> Result<TropMatrix, TropicalError> {
        let entries = self
            .entries
            .iter()
            .map(|&v| alpha.weight_sum(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TropMatrix { dim: self.dim, entries })
    }

    /// `n`-th (min,+) power by repeated squaring; `pow(0)` is the identity.
    pub fn trop_pow(&self, n: u64) -> Result<TropMatrix, TropicalError> {
        if n == 0 {
            return TropMatrix::identity(self.dim);
        }
        let mut result: Option<TropMatrix> = None;
        let mut square = self.clone();
        let mut rem = n;
        loop {
            if rem & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => r.trop_mul(&square)?,
                });
            }
            rem >>= 1;
            if rem == 0 {
                break;
            }
            square = square.trop_mul(&square)?;
        }
        Ok(result.expect("n >= 1"))
    }

    /// Minimum over the diagonal; `∞` when every diagonal entry is `∞`.
    pub fn min_diagonal(&self) -> TropicalValue {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(TropicalValue::INFINITY, TropicalValue::min)
    }
}

impl std::fmt::Debug for TropMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "TropMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 12 {
            for i in 0..self.dim {
                let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Tests whether `p` is a uniform finite shift of `q`: returns `Some(beta)`
/// iff every position has either `∞` in both matrices or finite entries
/// differing by the same `beta`. Two identical all-`∞` patterns with no
/// finite entry determine no shift and yield `None`.
pub fn shift_difference(p: &TropMatrix, q: &TropMatrix) -> Result<Option<i32>, TropicalError> {
    if p.dim != q.dim {
        return Err(TropicalError::DimMismatch { left: p.dim, right: q.dim });
    }
    let mut beta: Option<i64> = None;
    for (pv, qv) in p.entries.iter().zip(&q.entries) {
        match (pv.as_finite(), qv.as_finite()) {
            (None, None) => continue,
            (Some(pw), Some(qw)) => {
                let diff = pw as i64 - qw as i64;
                match beta {
                    None => beta = Some(diff),
                    Some(b) if b == diff => {}
                    Some(_) => return Ok(None),
                }
            }
            _ => return Ok(None),
        }
    }
    match beta {
        Some(b) => Ok(i32::try_from(b).ok().filter(|&v| v != INF_REPR)),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(dim: usize, vals: &[i32]) -> TropMatrix {
        let entries = vals
            .iter()
            .map(|&v| if v == i32::MAX { TropicalValue::INFINITY } else { TropicalValue::fin(v) })
            .collect();
        TropMatrix::from_entries(dim, entries).unwrap()
    }

    const INF: i32 = i32::MAX;

    #[test]
    fn product_against_identity() {
        let a = m(2, &[1, 2, 3, INF]);
        let id = TropMatrix::identity(2).unwrap();
        assert_eq!(a.trop_mul(&id).unwrap(), a);
        assert_eq!(id.trop_mul(&a).unwrap(), a);

        let b = m(2, &[1, 2, 3, 4]);
        assert_eq!(id.trop_mul(&b).unwrap(), b);
    }

    #[test]
    fn product_hand_evaluated() {
        // C[0][0] = min(1+0, 2+1) = 1, C[1][1] = min(3+5, inf) = 8.
        let a = m(2, &[1, 2, 3, INF]);
        let b = m(2, &[0, 5, 1, 0]);
        assert_eq!(a.trop_mul(&b).unwrap(), m(2, &[1, 2, 3, 8]));
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = TropMatrix::identity(2).unwrap();
        let b = TropMatrix::identity(3).unwrap();
        assert!(matches!(a.trop_mul(&b), Err(TropicalError::DimMismatch { .. })));
    }

    #[test]
    fn product_overflow_fails() {
        let a = m(1, &[i32::MAX - 1]);
        let b = m(1, &[i32::MAX - 1]);
        assert!(matches!(a.trop_mul(&b), Err(TropicalError::Overflow)));
    }

    #[test]
    fn large_entries_use_checked_path_correctly() {
        // Entries too large for the fast path but with representable sums.
        let big = 1 << 29;
        let a = m(2, &[big, INF, 0, big]);
        let b = m(2, &[big, 0, INF, big]);
        let c = a.trop_mul(&b).unwrap();
        assert_eq!(c, m(2, &[2 * big, big, big, 0]));
    }

    #[test]
    fn scalar_shift() {
        let a = m(2, &[0, INF, 2, 1]);
        assert_eq!(a.trop_scalar(TropicalValue::fin(4)).unwrap(), m(2, &[4, INF, 6, 5]));
        assert_eq!(a.trop_scalar(TropicalValue::ZERO).unwrap(), a);
        let all_inf = a.trop_scalar(TropicalValue::INFINITY).unwrap();
        assert_eq!(all_inf.count_infinite(), 4);
    }

    #[test]
    fn pow_matches_iterated_product() {
        let a = m(3, &[1, 3, INF, INF, 0, 2, 4, INF, 1]);
        let mut expect = a.clone();
        for k in 2..=9u64 {
            expect = a.trop_mul(&expect).unwrap();
            assert_eq!(a.trop_pow(k).unwrap(), expect, "power {k}");
        }
        assert_eq!(a.trop_pow(0).unwrap(), TropMatrix::identity(3).unwrap());
    }

    #[test]
    fn min_diagonal_basics() {
        assert_eq!(TropMatrix::identity(4).unwrap().min_diagonal(), TropicalValue::ZERO);
        let all_inf = m(2, &[INF, INF, INF, INF]);
        assert_eq!(all_inf.min_diagonal(), TropicalValue::INFINITY);
        assert_eq!(m(2, &[3, INF, INF, 2]).min_diagonal(), TropicalValue::fin(2));
    }

    #[test]
    fn shift_difference_uniform_and_not() {
        let q = m(2, &[1, INF, 3, 0]);
        let p = q.trop_scalar(TropicalValue::fin(7)).unwrap();
        assert_eq!(shift_difference(&p, &q).unwrap(), Some(7));
        assert_eq!(shift_difference(&q, &q).unwrap(), Some(0));

        let p = m(2, &[1, 2, 3, 4]);
        let q = m(2, &[0, 1, 2, 2]);
        assert_eq!(shift_difference(&p, &q).unwrap(), None);

        // Mismatched infinity patterns.
        let p = m(2, &[1, INF, 3, 0]);
        let q = m(2, &[1, 0, 3, 0]);
        assert_eq!(shift_difference(&p, &q).unwrap(), None);

        // Identical all-infinity matrices determine no shift.
        let all_inf = m(2, &[INF, INF, INF, INF]);
        assert_eq!(shift_difference(&all_inf, &all_inf).unwrap(), None);

        let a = TropMatrix::identity(2).unwrap();
        let b = TropMatrix::identity(3).unwrap();
        assert!(shift_difference(&a, &b).is_err());
    }

    #[test]
    fn from_entries_validation() {
        assert!(matches!(TropMatrix::from_entries(0, vec![]), Err(TropicalError::EmptyMatrix)));
        assert!(matches!(
            TropMatrix::from_entries(2, vec![TropicalValue::ZERO; 3]),
            Err(TropicalError::BadEntryCount { expected: 4, got: 3 })
        ));
    }

    mod kernel_equivalence {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(dim: usize) -> impl Strategy<Value = TropMatrix> {
            let entry = prop_oneof![
                3 => (-50i32..=50).prop_map(TropicalValue::fin),
                1 => Just(TropicalValue::INFINITY),
            ];
            prop::collection::vec(entry, dim * dim)
                .prop_map(move |e| TropMatrix::from_entries(dim, e).unwrap())
        }

        fn arb_pair() -> impl Strategy<Value = (TropMatrix, TropMatrix)> {
            (1usize..=9).prop_flat_map(|dim| (arb_matrix(dim), arb_matrix(dim)))
        }

        proptest! {
            // The blocked remapping kernel must agree with the guarded
            // reference kernel entry for entry.
            #[test]
            fn fast_path_matches_checked_path((a, b) in arb_pair()) {
                let fast = a.trop_mul(&b).unwrap();
                let checked = a.mul_checked(&b).unwrap();
                prop_assert_eq!(fast, checked);
            }
        }
    }
}
