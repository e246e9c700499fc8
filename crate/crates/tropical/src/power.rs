use crate::{TropMatrix, TropicalError};

/// Receives each power of the sequence `A^1, A^2, ..., A^K` in order.
///
/// `receive` must persist (or otherwise fully consume) the matrix before
/// returning; `power_sequence` will not compute the next power until it has.
/// A failing sink aborts the computation at that power, leaving everything
/// previously received intact.
pub trait PowerSink {
    fn receive(&mut self, k: u32, power: &TropMatrix) -> Result<(), TropicalError>;
}

/// Sink that keeps every power in memory. Mostly for tests and small runs.
#[derive(Default)]
pub struct MemorySink {
    pub powers: Vec<TropMatrix>,
}

impl PowerSink for MemorySink {
    fn receive(&mut self, k: u32, power: &TropMatrix) -> Result<(), TropicalError> {
        debug_assert_eq!(k as usize, self.powers.len() + 1);
        self.powers.push(power.clone());
        Ok(())
    }
}

/// Streams the (min,+) powers `A^k = A ⊗ A^{k-1}` for `k = 1..=k_max` into
/// `sink`, persisting each power before the next product starts. Returns the
/// number of matrix products performed.
pub fn power_sequence<S: PowerSink>(
    base: &TropMatrix,
    k_max: u32,
    sink: &mut S,
) -> Result<u32, TropicalError> {
    assert!(k_max >= 1, "power sequence needs k_max >= 1");
    sink.receive(1, base)?;
    let mut products = 0;
    let mut current = base.clone();
    for k in 2..=k_max {
        current = base.trop_mul(&current)?;
        products += 1;
        sink.receive(k, &current)?;
    }
    Ok(products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TropicalValue;

    #[test]
    fn k_one_emits_only_the_base() {
        let a = TropMatrix::identity(3).unwrap();
        let mut sink = MemorySink::default();
        let products = power_sequence(&a, 1, &mut sink).unwrap();
        assert_eq!(products, 0);
        assert_eq!(sink.powers.len(), 1);
        assert_eq!(sink.powers[0], a);
    }

    #[test]
    fn identity_powers_are_identity() {
        let id = TropMatrix::identity(4).unwrap();
        let mut sink = MemorySink::default();
        power_sequence(&id, 5, &mut sink).unwrap();
        assert_eq!(sink.powers.len(), 5);
        assert!(sink.powers.iter().all(|p| *p == id));
    }

    #[test]
    fn failing_sink_aborts_with_prior_powers_intact() {
        struct FailAt {
            inner: MemorySink,
            fail_k: u32,
        }
        impl PowerSink for FailAt {
            fn receive(&mut self, k: u32, power: &TropMatrix) -> Result<(), TropicalError> {
                if k == self.fail_k {
                    return Err(TropicalError::Io(std::io::Error::other("disk full")));
                }
                self.inner.receive(k, power)
            }
        }

        let a = TropMatrix::from_fn(2, |i, j| TropicalValue::fin((i + 2 * j) as i32)).unwrap();
        let mut sink = FailAt { inner: MemorySink::default(), fail_k: 3 };
        let err = power_sequence(&a, 5, &mut sink).unwrap_err();
        assert!(matches!(err, TropicalError::Io(_)));
        assert_eq!(sink.inner.powers.len(), 2);
        assert_eq!(sink.inner.powers[1], a.trop_mul(&a).unwrap());
    }
}
