//! Dynamic skyline cache: LFU-evicted query results tagged with the network
//! revision they were computed against.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::grid::{Cell, GridIndex};
use crate::query::SkylineQuery;
use crate::scalar::Scalar;
use crate::skyline::SkylineResult;

pub const DEFAULT_CACHE_CAPACITY: usize = 128;

/// Heading bucket used when the sector is the full circle.
const FULL_CIRCLE_BUCKET: u8 = u8::MAX;

/// Approximate query identity: origin grid cell, compass octant of the
/// heading, the sector width and the canonical preferences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub origin_cell: Cell,
    pub heading_bucket: u8,
    pub half_angle_bits: u64,
    pub preferences: String,
}

impl CacheKey {
    pub fn for_query<T: Scalar>(grid: &GridIndex<T>, query: &SkylineQuery<T>) -> Self {
        let (heading_bucket, half_angle_bits) = if query.heading.is_full_circle() {
            (FULL_CIRCLE_BUCKET, 180f64.to_bits())
        } else {
            let octant = (query.heading.bearing().as_f64() / 45.0).round() as i64;
            (octant.rem_euclid(8) as u8, query.heading.half_angle().as_f64().to_bits())
        };
        Self {
            origin_cell: grid.cell_of(query.origin),
            heading_bucket,
            half_angle_bits,
            preferences: query.preference_key(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CacheEntry<T> {
    pub result: SkylineResult<T>,
    pub hit_count: u64,
    pub inserted_seq: u64,
}

#[derive(Debug)]
struct Inner<T> {
    entries: HashMap<CacheKey, CacheEntry<T>>,
    next_seq: u64,
}

/// Thread-safe LFU cache. Lookups and stores are atomic read-modify-write
/// operations under one lock.
#[derive(Debug)]
pub struct SkylineCache<T> {
    capacity: usize,
    /// Traffic updates touching a smaller share of edges than this keep
    /// the cached entries. Zero means every update invalidates.
    survive_below: f64,
    inner: Mutex<Inner<T>>,
}

impl<T: Scalar> Default for SkylineCache<T> {
    fn default() -> Self {
        Self::new(DEFAULT_CACHE_CAPACITY)
    }
}

impl<T: Scalar> SkylineCache<T> {
    pub fn new(capacity: usize) -> Self {
        Self::with_threshold(capacity, 0.0)
    }

    pub fn with_threshold(capacity: usize, changed_edge_fraction: f64) -> Self {
        Self {
            capacity,
            survive_below: changed_edge_fraction.max(0.0),
            inner: Mutex::new(Inner { entries: HashMap::new(), next_seq: 0 }),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.inner.lock().unwrap().entries.clear();
    }

    pub fn contains(&self, key: &CacheKey) -> bool {
        self.inner.lock().unwrap().entries.contains_key(key)
    }

    pub fn hit_count(&self, key: &CacheKey) -> Option<u64> {
        self.inner.lock().unwrap().entries.get(key).map(|e| e.hit_count)
    }

    /// Returns the stored result if it was computed at `revision`, counting a
    /// hit. A stale entry is dropped instead of served.
    pub fn lookup(&self, key: &CacheKey, revision: u64) -> Option<SkylineResult<T>> {
        let mut inner = self.inner.lock().unwrap();
        match inner.entries.get_mut(key) {
            Some(e) if e.result.revision == revision => {
                e.hit_count += 1;
                Some(e.result.clone())
            }
            Some(_) => {
                inner.entries.remove(key);
                None
            }
            None => None,
        }
    }

    /// Inserts with a zero hit count. When the cache is full, the entry with
    /// the fewest hits among those already present is evicted, the oldest
    /// winning ties. Re-storing a key replaces it without eviction.
    pub fn store(&self, key: CacheKey, result: SkylineResult<T>) -> Option<CacheKey> {
        if self.capacity == 0 {
            return None;
        }
        let mut inner = self.inner.lock().unwrap();
        let seq = inner.next_seq;
        inner.next_seq += 1;
        let entry = CacheEntry { result, hit_count: 0, inserted_seq: seq };
        if let Some(slot) = inner.entries.get_mut(&key) {
            *slot = entry;
            return None;
        }
        let mut evicted = None;
        if inner.entries.len() >= self.capacity {
            let victim = inner
                .entries
                .iter()
                .min_by_key(|(_, e)| (e.hit_count, e.inserted_seq))
                .map(|(k, _)| k.clone())
                .expect("full cache has entries");
            inner.entries.remove(&victim);
            evicted = Some(victim);
        }
        inner.entries.insert(key, entry);
        evicted
    }

    /// Drops every entry computed before `new_revision`.
    pub fn invalidate_on_traffic(&self, new_revision: u64) -> usize {
        let mut inner = self.inner.lock().unwrap();
        let before = inner.entries.len();
        inner.entries.retain(|_, e| e.result.revision >= new_revision);
        before - inner.entries.len()
    }

    /// Reacts to a traffic update. Below the configured changed-edge
    /// threshold the entries are re-tagged as current; otherwise they are
    /// purged. Returns the number purged.
    pub fn on_traffic_update(&self, new_revision: u64, changed_fraction: f64) -> usize {
        if changed_fraction < self.survive_below {
            let mut inner = self.inner.lock().unwrap();
            for e in inner.entries.values_mut() {
                e.result.revision = new_revision;
            }
            return 0;
        }
        self.invalidate_on_traffic(new_revision)
    }
}
