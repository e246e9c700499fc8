use std::fmt;

use crate::TropicalError;

/// An element of the (min,+) semiring: a finite integer weight or `∞`.
///
/// Infinity is stored as the sentinel `i32::MAX`, so the semiring "sum"
/// (minimum) is plain integer `min` and the sentinel never wins against a
/// finite weight. Finite weights may be negative. The weight sum guards the
/// sentinel explicitly and refuses to wrap on overflow.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct TropicalValue(i32);

/// Sentinel bit pattern for `∞`.
pub(crate) const INF_REPR: i32 = i32::MAX;

impl TropicalValue {
    /// The absorbing element of weight addition, neutral for `min`.
    pub const INFINITY: TropicalValue = TropicalValue(INF_REPR);

    /// The neutral element of weight addition (the semiring "one").
    pub const ZERO: TropicalValue = TropicalValue(0);

    /// Wraps a finite weight. Fails on the reserved sentinel value.
    pub fn finite(weight: i32) -> Result<Self, TropicalError> {
        if weight == INF_REPR {
            return Err(TropicalError::ReservedSentinel { got: weight });
        }
        Ok(TropicalValue(weight))
    }

    /// Shorthand for test and construction code with known-small weights.
    ///
    /// Panics on the reserved sentinel.
    pub fn fin(weight: i32) -> Self {
        Self::finite(weight).expect("finite weight")
    }

    pub fn is_infinite(self) -> bool {
        self.0 == INF_REPR
    }

    pub fn as_finite(self) -> Option<i32> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0)
        }
    }

    /// Raw storage representation (`i32::MAX` means `∞`).
    pub(crate) fn repr(self) -> i32 {
        self.0
    }

    pub(crate) fn from_repr(repr: i32) -> Self {
        TropicalValue(repr)
    }

    /// Semiring "addition": minimum. `∞` is neutral.
    pub fn min(self, rhs: Self) -> Self {
        TropicalValue(self.0.min(rhs.0))
    }

    /// Semiring "multiplication": weight sum. `∞` absorbs; finite sums that
    /// leave the representable range (or collide with the sentinel) fail.
    pub fn weight_sum(self, rhs: Self) -> Result<Self, TropicalError> {
        if self.is_infinite() || rhs.is_infinite() {
            return Ok(Self::INFINITY);
        }
        match self.0.checked_add(rhs.0) {
            Some(v) if v != INF_REPR => Ok(TropicalValue(v)),
            _ => Err(TropicalError::Overflow),
        }
    }
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_finite() {
            Some(w) => write!(f, "{w}"),
            None => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_absorbing_for_weight_sum() {
        let x = TropicalValue::fin(-7);
        assert_eq!(TropicalValue::INFINITY.weight_sum(x).unwrap(), TropicalValue::INFINITY);
        assert_eq!(x.weight_sum(TropicalValue::INFINITY).unwrap(), TropicalValue::INFINITY);
    }

    #[test]
    fn infinity_is_neutral_for_min() {
        let x = TropicalValue::fin(3);
        assert_eq!(TropicalValue::INFINITY.min(x), x);
        assert_eq!(x.min(TropicalValue::INFINITY), x);
        assert_eq!(
            TropicalValue::INFINITY.min(TropicalValue::INFINITY),
            TropicalValue::INFINITY
        );
    }

    #[test]
    fn negative_weights_are_allowed() {
        let x = TropicalValue::fin(-26);
        let y = TropicalValue::fin(40);
        assert_eq!(x.weight_sum(y).unwrap(), TropicalValue::fin(14));
        assert_eq!(x.min(y), x);
    }

    #[test]
    fn sentinel_weight_is_rejected() {
        assert!(TropicalValue::finite(i32::MAX).is_err());
        assert!(TropicalValue::finite(i32::MAX - 1).is_ok());
        assert!(TropicalValue::finite(i32::MIN).is_ok());
    }

    #[test]
    fn weight_sum_detects_overflow() {
        let big = TropicalValue::fin(i32::MAX - 1);
        let one = TropicalValue::fin(1);
        assert!(matches!(big.weight_sum(one), Err(TropicalError::Overflow)));
        // A sum landing exactly on the sentinel is also unrepresentable.
        let almost = TropicalValue::fin(i32::MAX - 2);
        assert!(matches!(almost.weight_sum(one.weight_sum(one).unwrap()), Err(TropicalError::Overflow)));
        assert!(matches!(
            TropicalValue::fin(i32::MIN).weight_sum(TropicalValue::fin(-1)),
            Err(TropicalError::Overflow)
        ));
    }
}
