//! Access to the language models that generate arguments, prompt base
//! scores, classify claims directly and embed score prompts.

pub mod cache;
pub mod client;
pub mod config;
pub mod parse;
pub mod transport;

pub use cache::{cache_key, CacheEntry, CacheStats, ResponseCache};
pub use client::{LlmClient, LlmEmbedder};
pub use config::LlmEndpointConfig;
pub use parse::{classify_completion, parse_arguments, parse_label, parse_percentage, GeneratedDebate};
pub use transport::{FixtureTransport, HttpTransport, Transport};

use crate::error::Result;

/// Produces the supporting and attacking arguments for a claim.
pub trait ArgumentGenerator: Send + Sync {
    fn generate(&self, claim: &str) -> Result<GeneratedDebate>;
}
