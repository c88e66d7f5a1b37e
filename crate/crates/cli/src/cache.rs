//! On-disk cache of fibre results keyed by a hash of the specialised ideal.
//!
//! An entry is a text file `<key>.txt` whose first line is the SHA-256 of the
//! rest of the file:
//!
//! ```text
//! digest <hex>
//! dimension 3
//! field rational
//! runtime_ms 106
//! evidence
//! <canonical evidence text>
//! ```

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};
use tautring::fiber::FiberOptions;
use tautring::groebner::{Field, Ideal};

use crate::error::{CliError, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "TAUTRING_CACHE";

/// What a cache entry stores besides its key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedFiber {
    pub dimension: i64,
    pub field: Field,
    pub runtime_ms: u64,
    pub evidence: String,
}

#[derive(Debug)]
pub enum Lookup {
    Hit(CachedFiber),
    Miss,
    /// The entry exists but fails its digest or does not parse.
    Corrupt(String),
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Directory from the flag, else [`CACHE_ENV`], else the user cache directory.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()) {
        return PathBuf::from(p);
    }
    match (std::env::var_os("XDG_CACHE_HOME"), std::env::var_os("HOME")) {
        (Some(x), _) if !x.is_empty() => PathBuf::from(x).join("tautring"),
        (_, Some(h)) => PathBuf::from(h).join(".cache").join("tautring"),
        _ => PathBuf::from(".tautring-cache"),
    }
}

/// Text identifying a fibre computation: ring, order, field and generators.
pub fn descriptor(ideal: &Ideal, opts: &FiberOptions) -> String {
    let mut out = format!(
        "tautring fibre 1\nring {}\norder {}\nfield {}\nfull_basis {}\n",
        ideal.ring().descriptor(),
        opts.order.descriptor(),
        opts.field,
        opts.full_basis
    );
    for g in ideal.generators() {
        out.push_str(&g.render());
        out.push('\n');
    }
    out
}

pub fn key(ideal: &Ideal, opts: &FiberOptions) -> String {
    sha256_hex(descriptor(ideal, opts).as_bytes())
}

fn encode(entry: &CachedFiber) -> String {
    let body = format!(
        "dimension {}\nfield {}\nruntime_ms {}\nevidence\n{}",
        entry.dimension, entry.field, entry.runtime_ms, entry.evidence
    );
    format!("digest {}\n{}", sha256_hex(body.as_bytes()), body)
}

fn decode(text: &str) -> std::result::Result<CachedFiber, String> {
    let (head, body) = text.split_once('\n').ok_or("truncated entry")?;
    let digest = head.strip_prefix("digest ").ok_or("missing digest line")?;
    if sha256_hex(body.as_bytes()) != digest {
        return Err("digest mismatch".into());
    }
    let mut lines = body.splitn(5, '\n');
    let mut field = |name: &str| -> std::result::Result<String, String> {
        lines
            .next()
            .and_then(|l| l.strip_prefix(name))
            .and_then(|l| l.strip_prefix(' ').or(Some(l)))
            .map(str::to_string)
            .ok_or_else(|| format!("missing `{name}`"))
    };
    let dimension = field("dimension")?.parse().map_err(|_| "bad dimension")?;
    let fld = field("field")?.parse().map_err(|_| "bad field")?;
    let runtime_ms = field("runtime_ms")?.parse().map_err(|_| "bad runtime")?;
    field("evidence")?;
    let evidence = lines.next().unwrap_or("").to_string();
    Ok(CachedFiber {
        dimension,
        field: fld,
        runtime_ms,
        evidence,
    })
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
        Ok(Cache {
            dir,
            locks: Mutex::new(HashMap::new()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.txt"))
    }

    /// A lock serialising work on one key within this process.
    pub fn lock(&self, key: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(key.to_string()).or_default().clone()
    }

    pub fn load(&self, key: &str) -> Lookup {
        match fs::read_to_string(self.path(key)) {
            Ok(text) => match decode(&text) {
                Ok(entry) => Lookup::Hit(entry),
                Err(why) => Lookup::Corrupt(why),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Lookup::Miss,
            Err(e) => Lookup::Corrupt(e.to_string()),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn store(&self, key: &str, entry: &CachedFiber) -> Result<()> {
        let path = self.path(key);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(CliError::io(&self.dir))?;
        tmp.write_all(encode(entry).as_bytes()).map_err(CliError::io(tmp.path()))?;
        tmp.persist(&path).map_err(|e| CliError::Io { path, source: e.error })?;
        Ok(())
    }

    /// Keys of entries that fail their digest.
    pub fn scan_corrupt(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let mut names: Vec<_> = fs::read_dir(&self.dir)
            .map_err(CliError::io(&self.dir))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter_map(|n| n.strip_suffix(".txt").map(str::to_string))
            .collect();
        names.sort();
        for key in names {
            if let Lookup::Corrupt(_) = self.load(&key) {
                bad.push(key);
            }
        }
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry() -> CachedFiber {
        CachedFiber {
            dimension: 3,
            field: Field::Rational,
            runtime_ms: 17,
            evidence: "dimension 3\nupper\nx\n".into(),
        }
    }

    #[test]
    fn encode_decode_roundtrip() {
        let e = entry();
        assert_eq!(decode(&encode(&e)).unwrap(), e);
    }

    #[test]
    fn tampering_is_detected() {
        let text = encode(&entry()).replace("dimension 3\nfield", "dimension 2\nfield");
        assert_eq!(decode(&text).unwrap_err(), "digest mismatch");
        assert!(decode("").is_err());
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert!(matches!(cache.load("k"), Lookup::Miss));
        cache.store("k", &entry()).unwrap();
        assert!(matches!(cache.load("k"), Lookup::Hit(e) if e == entry()));
        fs::write(cache.path("j"), "digest 00\nnope").unwrap();
        assert_eq!(cache.scan_corrupt().unwrap(), ["j"]);
        // No temporary files are left behind.
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}
