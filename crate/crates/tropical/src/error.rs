use std::io;

use thiserror::Error;

/// Errors produced by tropical matrix operations and serialization.
#[derive(Debug, Error)]
pub enum TropicalError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("entry count {got} does not match dim^2 = {expected}")]
    BadEntryCount { expected: usize, got: usize },

    #[error("finite tropical weight overflowed 32-bit range")]
    Overflow,

    #[error("{got} is reserved for the infinity sentinel")]
    ReservedSentinel { got: i32 },

    #[error("malformed matrix file at byte {offset}: {reason}")]
    Format { offset: u64, reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}
