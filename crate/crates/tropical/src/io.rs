//! Bit-exact binary matrix files.
//!
//! Layout: magic `"TRPM"`, format version `1` as `u32` little-endian, the
//! dimension as `u64` little-endian, then `dim * dim` row-major entries as
//! `i32` little-endian with `2147483647` meaning `∞`.

use std::fs;
use std::path::Path;

use crate::value::INF_REPR;
use crate::{TropMatrix, TropicalError, TropicalValue};

const MAGIC: &[u8; 4] = b"TRPM";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

/// Encodes a matrix into the TRPM byte layout.
pub fn encode_matrix(matrix: &TropMatrix) -> Vec<u8> {
    let dim = matrix.dim();
    let mut buf = Vec::with_capacity(HEADER_LEN + 4 * dim * dim);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(dim as u64).to_le_bytes());
    for value in matrix.entries() {
        let repr = value.as_finite().unwrap_or(INF_REPR);
        buf.extend_from_slice(&repr.to_le_bytes());
    }
    buf
}

fn format_err(offset: usize, reason: impl Into<String>) -> TropicalError {
    TropicalError::Format { offset: offset as u64, reason: reason.into() }
}

/// Decodes a TRPM byte buffer back into a matrix.
pub fn decode_matrix(bytes: &[u8]) -> Result<TropMatrix, TropicalError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(format_err(0, "bad magic, expected \"TRPM\""));
    }
    if bytes.len() < 8 {
        return Err(format_err(bytes.len(), "truncated header"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(format_err(4, format!("unsupported format version {version}")));
    }
    if bytes.len() < HEADER_LEN {
        return Err(format_err(bytes.len(), "truncated header"));
    }
    let dim = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    if dim == 0 {
        return Err(format_err(8, "dimension must be positive"));
    }
    let dim = usize::try_from(dim).map_err(|_| format_err(8, "dimension exceeds address space"))?;
    let payload = dim
        .checked_mul(dim)
        .and_then(|sq| sq.checked_mul(4))
        .ok_or_else(|| format_err(8, "dimension exceeds address space"))?;
    let expected = HEADER_LEN + payload;
    if bytes.len() < expected {
        return Err(format_err(bytes.len(), format!("truncated payload, expected {expected} bytes")));
    }
    if bytes.len() > expected {
        return Err(format_err(expected, "trailing bytes after payload"));
    }
    let entries = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|chunk| {
            let repr = i32::from_le_bytes(chunk.try_into().unwrap());
            if repr == INF_REPR {
                TropicalValue::INFINITY
            } else {
                TropicalValue::fin(repr)
            }
        })
        .collect();
    TropMatrix::from_entries(dim, entries)
}

/// Writes a matrix to `path` in the TRPM format.
pub fn write_matrix(matrix: &TropMatrix, path: impl AsRef<Path>) -> Result<(), TropicalError> {
    Ok(fs::write(path, encode_matrix(matrix))?)
}

/// Reads a TRPM file back into a matrix.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<TropMatrix, TropicalError> {
    decode_matrix(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_including_sentinel_and_negatives() {
        let m = TropMatrix::from_fn(3, |i, j| {
            if (i + j) % 3 == 0 {
                TropicalValue::INFINITY
            } else {
                TropicalValue::fin(i as i32 - 2 * j as i32)
            }
        })
        .unwrap();
        assert_eq!(decode_matrix(&encode_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn one_by_one_infinity_round_trips() {
        let m = TropMatrix::from_entries(1, vec![TropicalValue::INFINITY]).unwrap();
        let bytes = encode_matrix(&m);
        assert_eq!(&bytes[16..20], &INF_REPR.to_le_bytes());
        assert_eq!(decode_matrix(&bytes).unwrap(), m);
    }

    #[test]
    fn wrong_magic_is_rejected_at_offset_zero() {
        let mut bytes = encode_matrix(&TropMatrix::identity(2).unwrap());
        bytes[0] = b'X';
        match decode_matrix(&bytes) {
            Err(TropicalError::Format { offset: 0, .. }) => {}
            other => panic!("expected format error at offset 0, got {other:?}"),
        }
    }

    #[test]
    fn wrong_version_is_rejected() {
        let mut bytes = encode_matrix(&TropMatrix::identity(2).unwrap());
        bytes[4] = 9;
        match decode_matrix(&bytes) {
            Err(TropicalError::Format { offset: 4, .. }) => {}
            other => panic!("expected format error at offset 4, got {other:?}"),
        }
    }

    #[test]
    fn truncation_reports_cut_offset() {
        let bytes = encode_matrix(&TropMatrix::identity(3).unwrap());
        let cut = bytes.len() - 5;
        match decode_matrix(&bytes[..cut]) {
            Err(TropicalError::Format { offset, .. }) => assert_eq!(offset, cut as u64),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let mut bytes = encode_matrix(&TropMatrix::identity(2).unwrap());
        let expected = bytes.len();
        bytes.push(0);
        match decode_matrix(&bytes) {
            Err(TropicalError::Format { offset, .. }) => assert_eq!(offset, expected as u64),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.trpm");
        let m = TropMatrix::from_fn(10, |i, j| TropicalValue::fin((i * 10 + j) as i32)).unwrap();
        write_matrix(&m, &path).unwrap();
        assert_eq!(read_matrix(&path).unwrap(), m);
    }
}
