//! Content-addressed JSON cache for character tables and sampling results.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifies one cached computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey<'a> {
    pub module: &'a str,
    pub n: usize,
    pub h: &'a str,
    pub j: &'a str,
    pub seed: Option<u64>,
}

impl CacheKey<'_> {
    pub fn digest(&self) -> String {
        let seed = self.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
        let material = format!("{}|{}|{}|{}|{}|{}", self.module, self.n, self.h, self.j, seed, VERSION);
        hex::encode(Sha256::digest(material.as_bytes()))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, key: &CacheKey<'_>) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.module).join(format!("{}.json", key.digest())))
    }

    /// Unreadable or corrupt entries count as misses.
    pub fn get(&self, key: &CacheKey<'_>) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes via a temporary file and rename so readers never see partial data.
    pub fn put(&self, key: &CacheKey<'_>, value: &Value) -> std::io::Result<()> {
        let Some(path) = self.path(key) else { return Ok(()) };
        let parent = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{}.{}.tmp", key.digest(), std::process::id()));
        fs::write(&tmp, serde_json::to_string(value)?)?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn key(h: &str) -> CacheKey<'_> {
        CacheKey { module: "dotchar", n: 3, h, j: "", seed: None }
    }

    #[test]
    fn digests_separate_fields() {
        assert_ne!(key("2,3,3").digest(), key("3,3,3").digest());
        let seeded = CacheKey { seed: Some(1), ..key("2,3,3") };
        assert_ne!(seeded.digest(), key("2,3,3").digest());
        assert_eq!(key("2,3,3").digest().len(), 64);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        assert!(cache.get(&key("2,3,3")).is_none());
        cache.put(&key("2,3,3"), &json!({"a": [1, 2]})).unwrap();
        assert_eq!(cache.get(&key("2,3,3")), Some(json!({"a": [1, 2]})));
        let off = Cache::disabled();
        off.put(&key("2,3,3"), &json!(1)).unwrap();
        assert!(off.get(&key("2,3,3")).is_none());
    }
}
