//! Storage for the power sequence `A^1..A^K`.
//!
//! The recurrence search revisits powers in pairs, so stores hand out
//! `Arc`-shared matrices. The disk cache keeps one `A_pow_{k}.trpm` file per
//! power next to a small manifest identifying the base matrix; a cache whose
//! manifest does not match is wiped and rebuilt, which makes interrupted runs
//! resumable and stale caches harmless. A bounded set of recently used
//! matrices stays resident in memory.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use tropical::{decode_matrix, encode_matrix, TropMatrix};

use crate::{CylinderError, Variant};

/// Serialization and file I/O time spent by a store, kept separate so
/// reports can break a run down into compute / serialize / store.
#[derive(Copy, Clone, Debug, Default)]
pub struct StoreMetrics {
    pub serialize: Duration,
    pub io: Duration,
    pub bytes_written: u64,
    pub bytes_read: u64,
}

/// Keyed access to the powers of one base matrix.
pub trait PowerStore {
    fn contains(&self, k: u32) -> bool;
    fn get(&mut self, k: u32) -> Result<Option<Arc<TropMatrix>>, CylinderError>;
    fn put(&mut self, k: u32, matrix: TropMatrix) -> Result<Arc<TropMatrix>, CylinderError>;
    fn metrics(&self) -> StoreMetrics;
}

/// Unbounded in-memory store.
#[derive(Default)]
pub struct MemoryPowerStore {
    powers: HashMap<u32, Arc<TropMatrix>>,
}

impl PowerStore for MemoryPowerStore {
    fn contains(&self, k: u32) -> bool {
        self.powers.contains_key(&k)
    }

    fn get(&mut self, k: u32) -> Result<Option<Arc<TropMatrix>>, CylinderError> {
        Ok(self.powers.get(&k).cloned())
    }

    fn put(&mut self, k: u32, matrix: TropMatrix) -> Result<Arc<TropMatrix>, CylinderError> {
        let arc = Arc::new(matrix);
        self.powers.insert(k, arc.clone());
        Ok(arc)
    }

    fn metrics(&self) -> StoreMetrics {
        StoreMetrics::default()
    }
}

/// Identity of the base matrix a cache belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub m: usize,
    pub variant: Variant,
    pub dim: usize,
    pub base_hash: u64,
}

impl CacheKey {
    pub fn for_matrix(m: usize, variant: Variant, base: &TropMatrix) -> CacheKey {
        CacheKey { m, variant, dim: base.dim(), base_hash: fnv1a(&encode_matrix(base)) }
    }

    fn manifest_text(&self) -> String {
        format!(
            "format=1\nm={}\nvariant={}\ndim={}\nbase_hash={:016x}\n",
            self.m, self.variant, self.dim, self.base_hash
        )
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Disk-backed power cache with a bounded resident set.
pub struct DiskPowerCache {
    dir: PathBuf,
    resident_budget: usize,
    resident: HashMap<u32, Arc<TropMatrix>>,
    touch_order: Vec<u32>,
    metrics: StoreMetrics,
}

const MANIFEST: &str = "manifest.txt";

impl DiskPowerCache {
    /// Opens (or initializes) the cache at `dir` for the base matrix
    /// described by `key`. An existing cache with a different manifest is
    /// invalidated: its power files are removed and a fresh manifest written.
    /// `resident_budget` bounds how many powers stay decoded in memory.
    pub fn open(dir: impl AsRef<Path>, key: &CacheKey, resident_budget: usize) -> Result<Self, CylinderError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(tropical::TropicalError::from)?;
        let manifest_path = dir.join(MANIFEST);
        let expected = key.manifest_text();
        let fresh = match fs::read_to_string(&manifest_path) {
            Ok(text) => text == expected,
            Err(_) => false,
        };
        if !fresh {
            Self::wipe(&dir)?;
            fs::write(&manifest_path, expected).map_err(tropical::TropicalError::from)?;
        }
        Ok(DiskPowerCache {
            dir,
            resident_budget: resident_budget.max(2),
            resident: HashMap::new(),
            touch_order: Vec::new(),
            metrics: StoreMetrics::default(),
        })
    }

    fn wipe(dir: &Path) -> Result<(), CylinderError> {
        for entry in fs::read_dir(dir).map_err(tropical::TropicalError::from)? {
            let entry = entry.map_err(tropical::TropicalError::from)?;
            let name = entry.file_name();
            let name = name.to_string_lossy();
            if name == MANIFEST || (name.starts_with("A_pow_") && name.ends_with(".trpm")) {
                fs::remove_file(entry.path()).map_err(tropical::TropicalError::from)?;
            }
        }
        Ok(())
    }

    fn power_path(&self, k: u32) -> PathBuf {
        self.dir.join(format!("A_pow_{k}.trpm"))
    }

    fn touch(&mut self, k: u32) {
        self.touch_order.retain(|&x| x != k);
        self.touch_order.push(k);
        while self.resident.len() > self.resident_budget {
            let evict = self.touch_order.remove(0);
            self.resident.remove(&evict);
        }
    }
}

impl PowerStore for DiskPowerCache {
    fn contains(&self, k: u32) -> bool {
        self.resident.contains_key(&k) || self.power_path(k).exists()
    }

    fn get(&mut self, k: u32) -> Result<Option<Arc<TropMatrix>>, CylinderError> {
        if let Some(found) = self.resident.get(&k).cloned() {
            self.touch(k);
            return Ok(Some(found));
        }
        let path = self.power_path(k);
        if !path.exists() {
            return Ok(None);
        }
        let io_start = Instant::now();
        let bytes = fs::read(&path).map_err(tropical::TropicalError::from)?;
        self.metrics.io += io_start.elapsed();
        self.metrics.bytes_read += bytes.len() as u64;

        let decode_start = Instant::now();
        let matrix = decode_matrix(&bytes)?;
        self.metrics.serialize += decode_start.elapsed();

        let arc = Arc::new(matrix);
        self.resident.insert(k, arc.clone());
        self.touch(k);
        Ok(Some(arc))
    }

    fn put(&mut self, k: u32, matrix: TropMatrix) -> Result<Arc<TropMatrix>, CylinderError> {
        let encode_start = Instant::now();
        let bytes = encode_matrix(&matrix);
        self.metrics.serialize += encode_start.elapsed();

        // Write-then-rename keeps a crash from leaving a torn power file.
        let io_start = Instant::now();
        let tmp = self.dir.join(format!("A_pow_{k}.trpm.tmp"));
        fs::write(&tmp, &bytes).map_err(tropical::TropicalError::from)?;
        fs::rename(&tmp, self.power_path(k)).map_err(tropical::TropicalError::from)?;
        self.metrics.io += io_start.elapsed();
        self.metrics.bytes_written += bytes.len() as u64;

        let arc = Arc::new(matrix);
        self.resident.insert(k, arc.clone());
        self.touch(k);
        Ok(arc)
    }

    fn metrics(&self) -> StoreMetrics {
        self.metrics
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropical::TropicalValue;

    fn sample_matrix(seed: i32) -> TropMatrix {
        TropMatrix::from_fn(5, |i, j| {
            if (i + j) % 4 == 0 {
                TropicalValue::INFINITY
            } else {
                TropicalValue::fin(seed + i as i32 - j as i32)
            }
        })
        .unwrap()
    }

    #[test]
    fn disk_cache_round_trips_and_persists() {
        let dir = tempfile::tempdir().unwrap();
        let base = sample_matrix(1);
        let key = CacheKey::for_matrix(5, Variant::Standard, &base);

        let mut cache = DiskPowerCache::open(dir.path(), &key, 4).unwrap();
        assert!(!cache.contains(1));
        cache.put(1, base.clone()).unwrap();
        cache.put(2, base.trop_mul(&base).unwrap()).unwrap();

        // A new handle with the same key sees the files.
        let mut reopened = DiskPowerCache::open(dir.path(), &key, 4).unwrap();
        assert!(reopened.contains(1) && reopened.contains(2));
        assert_eq!(*reopened.get(2).unwrap().unwrap(), base.trop_mul(&base).unwrap());
        assert!(reopened.metrics().bytes_read > 0);
    }

    #[test]
    fn mismatched_manifest_invalidates() {
        let dir = tempfile::tempdir().unwrap();
        let base = sample_matrix(1);
        let key = CacheKey::for_matrix(5, Variant::Standard, &base);
        let mut cache = DiskPowerCache::open(dir.path(), &key, 4).unwrap();
        cache.put(1, base.clone()).unwrap();
        drop(cache);

        let other = sample_matrix(2);
        let other_key = CacheKey::for_matrix(5, Variant::Standard, &other);
        let cache = DiskPowerCache::open(dir.path(), &other_key, 4).unwrap();
        assert!(!cache.contains(1), "stale powers must be wiped");
    }

    #[test]
    fn resident_set_is_bounded() {
        let dir = tempfile::tempdir().unwrap();
        let base = sample_matrix(3);
        let key = CacheKey::for_matrix(5, Variant::Standard, &base);
        let mut cache = DiskPowerCache::open(dir.path(), &key, 2).unwrap();
        for k in 1..=6 {
            cache.put(k, sample_matrix(k as i32)).unwrap();
        }
        assert!(cache.resident.len() <= 2);
        // Evicted powers are still readable from disk.
        assert_eq!(*cache.get(1).unwrap().unwrap(), sample_matrix(1));
    }
}
