//! Append-only JSON-lines memo cache for exact values.

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, Rational};
use crate::geometries::{Degree, Geometry, Insertion};
use crate::series::TwoPointSource;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

/// Bumped whenever a formula changes so stale records stop matching.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the cache path.
pub const CACHE_ENV: &str = "RESMIRROR_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub schema: u32,
    pub geometry: String,
    pub params: Vec<String>,
    pub degree: String,
    pub insertions: Vec<String>,
}

impl CacheKey {
    pub fn new(geometry: &str, params: Vec<String>, degree: String, insertions: Vec<String>) -> Self {
        CacheKey { schema: SCHEMA_VERSION, geometry: geometry.into(), params, degree, insertions }
    }

    /// Key of a two-point number.
    pub fn two_point(g: &Geometry, d: &Degree, a: &Insertion, b: &Insertion) -> Self {
        let params = match g {
            Geometry::Cpn { n, k } => vec![format!("N={n}"), format!("k={k}")],
            Geometry::Kf0 { k } => vec![format!("k={}", fmt_rational(k))],
            _ => Vec::new(),
        };
        Self::new(g.name(), params, d.to_string(), vec![a.label(), b.label()])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub value: String,
    pub provenance: String,
}

/// In-memory index over an optional backing file.
pub struct Cache {
    path: Option<PathBuf>,
    map: Mutex<HashMap<CacheKey, Rational>>,
    writer: Mutex<Option<File>>,
}

impl Cache {
    /// A cache that never touches disk.
    pub fn in_memory() -> Self {
        Cache { path: None, map: Mutex::new(HashMap::new()), writer: Mutex::new(None) }
    }

    /// Loads `path` if present. Unreadable files and malformed lines are reported on
    /// stderr and skipped; conflicting records are an error.
    pub fn open(path: &Path) -> Result<Self> {
        let mut map = HashMap::new();
        if path.exists() {
            match File::open(path) {
                Ok(f) => {
                    for (i, line) in BufReader::new(f).lines().enumerate() {
                        let line = match line {
                            Ok(l) => l,
                            Err(e) => {
                                eprintln!("warning: cache {} unreadable at line {}: {e}", path.display(), i + 1);
                                break;
                            }
                        };
                        if line.trim().is_empty() {
                            continue;
                        }
                        let rec: CacheRecord = match serde_json::from_str(&line) {
                            Ok(r) => r,
                            Err(e) => {
                                eprintln!("warning: skipping malformed cache line {}: {e}", i + 1);
                                continue;
                            }
                        };
                        let v = match parse_rational(&rec.value) {
                            Ok(v) => v,
                            Err(e) => {
                                eprintln!("warning: skipping cache line {}: {e}", i + 1);
                                continue;
                            }
                        };
                        insert_checked(&mut map, rec.key, v)?;
                    }
                }
                Err(e) => eprintln!("warning: cannot read cache {}: {e}; recomputing", path.display()),
            }
        }
        let writer = match OpenOptions::new().create(true).append(true).open(path) {
            Ok(f) => Some(f),
            Err(e) => {
                eprintln!("warning: cannot write cache {}: {e}", path.display());
                None
            }
        };
        Ok(Cache { path: Some(path.to_path_buf()), map: Mutex::new(map), writer: Mutex::new(writer) })
    }

    /// Opens the file named by `RESMIRROR_CACHE`, falling back to `default`.
    pub fn from_env(default: Option<&Path>) -> Result<Self> {
        match std::env::var_os(CACHE_ENV).map(PathBuf::from).or_else(|| default.map(Path::to_path_buf)) {
            Some(p) => Self::open(&p),
            None => Ok(Self::in_memory()),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, key: &CacheKey) -> Option<Rational> {
        self.map.lock().unwrap().get(key).cloned()
    }

    /// Records a value; storing an identical value again is a no-op.
    pub fn store(&self, key: CacheKey, value: &Rational, provenance: &str) -> Result<()> {
        let mut map = self.map.lock().unwrap();
        if let Some(old) = map.get(&key) {
            return if old == value { Ok(()) } else { Err(conflict(&key, old, value)) };
        }
        let rec = CacheRecord { key: key.clone(), value: fmt_rational(value), provenance: provenance.into() };
        map.insert(key, value.clone());
        if let Some(f) = self.writer.lock().unwrap().as_mut() {
            let mut line = serde_json::to_string(&rec).map_err(|e| Error::CacheCorruption(e.to_string()))?;
            line.push('\n');
            // one write per record keeps lines whole under O_APPEND
            if let Err(e) = f.write_all(line.as_bytes()) {
                eprintln!("warning: cache write failed: {e}");
            }
        }
        Ok(())
    }

    /// Returns the cached value or computes and stores it.
    pub fn get_or_compute(
        &self,
        key: CacheKey,
        provenance: &str,
        f: impl FnOnce() -> Result<Rational>,
    ) -> Result<Rational> {
        if let Some(v) = self.lookup(&key) {
            return Ok(v);
        }
        let v = f()?;
        self.store(key, &v, provenance)?;
        Ok(v)
    }
}

fn conflict(key: &CacheKey, old: &Rational, new: &Rational) -> Error {
    Error::CacheCorruption(format!("{key:?} holds {} but {} was computed", fmt_rational(old), fmt_rational(new)))
}

fn insert_checked(map: &mut HashMap<CacheKey, Rational>, key: CacheKey, v: Rational) -> Result<()> {
    match map.get(&key) {
        Some(old) if *old != v => Err(conflict(&key, old, &v)),
        Some(_) => Ok(()),
        None => {
            map.insert(key, v);
            Ok(())
        }
    }
}

impl TwoPointSource for Cache {
    fn two_point(&self, g: &Geometry, d: &Degree, a: &Insertion, b: &Insertion) -> Result<Rational> {
        self.get_or_compute(CacheKey::two_point(g, d, a, b), "two_point", || g.two_point(d, a, b))
    }
}
