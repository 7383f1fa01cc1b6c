//! Content-addressed store of raw completions.
//!
//! Each entry is `<sha256>.json` where the hash covers the model, the
//! prompt and the temperature. Entries are written to a temporary file and
//! renamed, so concurrent readers never see a partial entry.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub model: String,
    pub prompt: String,
    pub temperature: f64,
    pub completion: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub bytes: u64,
}

#[derive(Debug)]
pub struct ResponseCache {
    dir: PathBuf,
    counter: AtomicU64,
}

pub fn cache_key(model: &str, prompt: &str, temperature: f64) -> String {
    let mut h = Sha256::new();
    // length prefixes keep field boundaries unambiguous
    for field in [model.as_bytes(), prompt.as_bytes()] {
        h.update((field.len() as u64).to_le_bytes());
        h.update(field);
    }
    h.update(temperature.to_bits().to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl ResponseCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ResponseCache {
            dir,
            counter: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The cached completion, if present and matching the request exactly.
    pub fn get(&self, model: &str, prompt: &str, temperature: f64) -> Option<String> {
        let text = fs::read_to_string(self.path(&cache_key(model, prompt, temperature))).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.model == model && entry.prompt == prompt && entry.temperature == temperature)
            .then_some(entry.completion)
    }

    pub fn put(&self, model: &str, prompt: &str, temperature: f64, completion: &str) -> Result<()> {
        let entry = CacheEntry {
            model: model.into(),
            prompt: prompt.into(),
            temperature,
            completion: completion.into(),
        };
        let key = cache_key(model, prompt, temperature);
        let tmp = self.dir.join(format!(
            ".{key}.{}.{}.tmp",
            std::process::id(),
            self.counter.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
        fs::rename(&tmp, self.path(&key))?;
        Ok(())
    }

    fn entry_paths(&self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for e in fs::read_dir(&self.dir)? {
            let p = e?.path();
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.ends_with(".json") && !name.starts_with('.') {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn stats(&self) -> Result<CacheStats> {
        let mut s = CacheStats::default();
        for p in self.entry_paths()? {
            s.entries += 1;
            s.bytes += fs::metadata(&p)?.len();
        }
        Ok(s)
    }

    /// Removes every entry. Returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let paths = self.entry_paths()?;
        for p in &paths {
            fs::remove_file(p)?;
        }
        Ok(paths.len())
    }
}
