//! Append-only line-delimited store of computed Hilbert values.
//!
//! Each line is one JSON [`CacheEntry`]. Opening a cache reads every line
//! into an in-memory index; a torn final line left by an interrupted write is
//! cut off. Many threads may read and write through one [`Cache`]; writes are
//! serialized and each line is written with a single call.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolation::HilbertValue;
use crate::uples::Uple;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: u32,
    /// Sorted descending.
    pub a: Uple,
    pub m: u32,
    pub modulus: u64,
    pub seed: u64,
    pub trials: u32,
}

impl CacheKey {
    pub fn new(n: u32, a: &Uple, m: u32, modulus: u64, seed: u64, trials: u32) -> Self {
        CacheKey {
            n,
            a: a.sorted_desc(),
            m,
            modulus,
            seed,
            trials,
        }
    }
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} A=({}) m={} p={} seed={} trials={}",
            self.n, self.a, self.m, self.modulus, self.seed, self.trials
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub value: HilbertValue,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

struct Inner {
    index: HashMap<CacheKey, HilbertValue>,
    file: File,
}

pub struct Cache {
    path: PathBuf,
    inner: Mutex<Inner>,
}

impl Cache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)?;
        let mut text = String::new();
        file.read_to_string(&mut text)?;
        let whole = text.rfind('\n').map_or(0, |i| i + 1);
        if whole < text.len() {
            file.set_len(whole as u64)?;
        }
        let mut index = HashMap::new();
        for line in text[..whole].lines().filter(|l| !l.trim().is_empty()) {
            let entry: CacheEntry = serde_json::from_str(line)?;
            record(&mut index, entry.key, entry.value)?;
        }
        Ok(Cache {
            path,
            inner: Mutex::new(Inner { index, file }),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &CacheKey) -> Option<HilbertValue> {
        self.inner.lock().unwrap().index.get(key).cloned()
    }

    /// Stores a value; returns whether a new line was written. A key already
    /// present with a different value is an integrity error.
    pub fn insert(&self, key: CacheKey, value: HilbertValue) -> Result<bool> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(old) = inner.index.get(&key) {
            if *old != value {
                return Err(Error::CacheIntegrity {
                    key: key.to_string(),
                });
            }
            return Ok(false);
        }
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let entry = CacheEntry {
            key: key.clone(),
            value: value.clone(),
            timestamp,
        };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        inner.file.write_all(line.as_bytes())?;
        inner.file.flush()?;
        inner.index.insert(key, value);
        Ok(true)
    }

    /// Cached value for `key`, computing and storing it when absent.
    pub fn get_or_insert_with(
        &self,
        key: CacheKey,
        compute: impl FnOnce() -> Result<HilbertValue>,
    ) -> Result<HilbertValue> {
        if let Some(v) = self.get(&key) {
            return Ok(v);
        }
        let v = compute()?;
        self.insert(key, v.clone())?;
        Ok(v)
    }
}

fn record(
    index: &mut HashMap<CacheKey, HilbertValue>,
    key: CacheKey,
    value: HilbertValue,
) -> Result<()> {
    match index.get(&key) {
        Some(old) if *old != value => Err(Error::CacheIntegrity {
            key: key.to_string(),
        }),
        Some(_) => Ok(()),
        None => {
            index.insert(key, value);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolation::Method;

    fn value(v: u64) -> HilbertValue {
        HilbertValue {
            value: v,
            method: Method::RankOracle,
            modulus: 1_000_003,
            seed: Some(0),
            trials: 3,
        }
    }

    fn key(a: &[i64]) -> CacheKey {
        CacheKey::new(2, &Uple::new(a.to_vec()), 2, 1_000_003, 0, 3)
    }

    #[test]
    fn round_trip_through_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        {
            let c = Cache::open(&path).unwrap();
            assert!(c.insert(key(&[2, 2]), value(5)).unwrap());
            assert!(!c.insert(key(&[2, 2]), value(5)).unwrap());
            assert!(c.insert(key(&[1, 2]), value(4)).unwrap());
        }
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get(&key(&[2, 1])), Some(value(4)));
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);
    }

    #[test]
    fn conflicting_value_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path().join("c.jsonl")).unwrap();
        c.insert(key(&[2, 2]), value(5)).unwrap();
        assert!(matches!(
            c.insert(key(&[2, 2]), value(6)),
            Err(Error::CacheIntegrity { .. })
        ));
    }

    #[test]
    fn torn_tail_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        Cache::open(&path)
            .unwrap()
            .insert(key(&[2, 2]), value(5))
            .unwrap();
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(br#"{"key":{"n":2,"a":[3"#).unwrap();
        drop(f);
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        c.insert(key(&[3]), value(6)).unwrap();
        assert_eq!(Cache::open(&path).unwrap().len(), 2);
    }

    #[test]
    fn conflicting_lines_on_disk_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let line = |v| {
            let e = CacheEntry {
                key: key(&[2, 2]),
                value: value(v),
                timestamp: 0,
            };
            serde_json::to_string(&e).unwrap() + "\n"
        };
        std::fs::write(&path, line(5) + &line(6)).unwrap();
        assert!(matches!(
            Cache::open(&path),
            Err(Error::CacheIntegrity { .. })
        ));
    }

    #[test]
    fn shared_across_threads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let c = Cache::open(&path).unwrap();
        std::thread::scope(|s| {
            for t in 0..8u64 {
                let c = &c;
                s.spawn(move || {
                    for i in 0..50 {
                        let k = CacheKey::new(
                            2,
                            &Uple::new(vec![1 + (i % 5)]),
                            (i % 7) as u32,
                            1_000_003,
                            t % 2,
                            3,
                        );
                        c.insert(k, value(i as u64 % 5 + (i % 7) as u64 * 10))
                            .unwrap();
                    }
                });
            }
        });
        let reopened = Cache::open(&path).unwrap();
        assert_eq!(reopened.len(), c.len());
        assert_eq!(
            std::fs::read_to_string(&path).unwrap().lines().count(),
            c.len()
        );
    }
}
