//! Embedding sources for the base score model.
//!
//! The engine treats an embedder as an opaque deterministic map from prompt
//! text to a fixed-width vector. [`CachedEmbedder`] memoises results so each
//! prompt is fetched once per process.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(Vec<f64>);

impl Embedding {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("embedding has zero dimensions".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "embedding entry {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Embedding(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub trait Embedder: Send + Sync {
    fn embed(&self, text: &str) -> Result<Embedding>;
}

impl<E: Embedder + ?Sized> Embedder for &E {
    fn embed(&self, text: &str) -> Result<Embedding> {
        (**self).embed(text)
    }
}

impl<E: Embedder + ?Sized> Embedder for Box<E> {
    fn embed(&self, text: &str) -> Result<Embedding> {
        (**self).embed(text)
    }
}

impl<E: Embedder + ?Sized> Embedder for std::sync::Arc<E> {
    fn embed(&self, text: &str) -> Result<Embedding> {
        (**self).embed(text)
    }
}

/// Memoising wrapper. Concurrent readers share the map; inserts take the
/// write lock.
pub struct CachedEmbedder<E> {
    inner: E,
    cache: RwLock<HashMap<String, Embedding>>,
    dim: RwLock<Option<usize>>,
}

impl<E: Embedder> CachedEmbedder<E> {
    pub fn new(inner: E) -> Self {
        CachedEmbedder {
            inner,
            cache: RwLock::new(HashMap::new()),
            dim: RwLock::new(None),
        }
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("embedding cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fetches every uncached text with at most `parallelism` requests in
    /// flight. Returns the first failure, if any; successes stay cached.
    pub fn prefetch(&self, texts: &[String], parallelism: usize) -> Result<()> {
        let missing: Vec<&String> = {
            let cache = self.cache.read().expect("embedding cache poisoned");
            let mut seen = std::collections::HashSet::new();
            texts
                .iter()
                .filter(|t| !cache.contains_key(t.as_str()) && seen.insert(t.as_str()))
                .collect()
        };
        if missing.is_empty() {
            return Ok(());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let results: Vec<Result<Embedding>> =
            pool.install(|| missing.par_iter().map(|t| self.embed(t)).collect());
        results.into_iter().try_for_each(|r| r.map(|_| ()))
    }
}

impl<E: Embedder> Embedder for CachedEmbedder<E> {
    fn embed(&self, text: &str) -> Result<Embedding> {
        if let Some(e) = self.cache.read().expect("embedding cache poisoned").get(text) {
            return Ok(e.clone());
        }
        let e = self.inner.embed(text)?;
        {
            let mut dim = self.dim.write().expect("embedding cache poisoned");
            match *dim {
                Some(d) if d != e.dim() => {
                    return Err(Error::Config(format!(
                        "embedding source changed dimension from {d} to {}",
                        e.dim()
                    )))
                }
                _ => *dim = Some(e.dim()),
            }
        }
        self.cache
            .write()
            .expect("embedding cache poisoned")
            .insert(text.to_string(), e.clone());
        Ok(e)
    }
}
