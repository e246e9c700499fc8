//! Dense linear algebra over the tropical (min,+) semiring on integers.
//!
//! Elements live in `ℤ ∪ {∞}`: "addition" is `min` (with `∞` neutral) and
//! "multiplication" is ordinary integer addition (with `∞` absorbing).
//! Matrices are square, dense and row-major; products run in parallel over
//! disjoint row blocks and are bit-for-bit deterministic regardless of the
//! number of threads.
//!
//! The crate also provides power sequences with a pluggable persistence sink,
//! uniform-shift detection between two matrices, and a bit-exact binary file
//! format (`TRPM`).

mod error;
mod io;
mod matrix;
mod power;
mod value;

pub use error::TropicalError;
pub use io::{decode_matrix, encode_matrix, read_matrix, write_matrix};
pub use matrix::{shift_difference, TropMatrix};
pub use power::{power_sequence, MemorySink, PowerSink};
pub use value::TropicalValue;
