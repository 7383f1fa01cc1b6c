use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One chat-completions style endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LlmEndpointConfig {
    pub base_url: String,
    pub chat_path: String,
    pub embeddings_path: String,
    pub model: String,
    /// Sampling temperature for argument generation. Scoring and
    /// classification always decode greedily.
    pub temperature: f64,
    pub max_tokens: u32,
    /// Name of the environment variable holding the bearer token, if the
    /// endpoint needs one.
    pub api_key_env: Option<String>,
    pub timeout_secs: f64,
    pub retries: u32,
    pub backoff_ms: u64,
}

impl Default for LlmEndpointConfig {
    fn default() -> Self {
        LlmEndpointConfig {
            base_url: "http://127.0.0.1:8000".into(),
            chat_path: "/v1/chat/completions".into(),
            embeddings_path: "/v1/embeddings".into(),
            model: "default".into(),
            temperature: 0.0,
            max_tokens: 1024,
            api_key_env: None,
            timeout_secs: 60.0,
            retries: 3,
            backoff_ms: 500,
        }
    }
}

impl LlmEndpointConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::Config(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(Error::Config(format!(
                "timeout must be > 0, got {}",
                self.timeout_secs
            )));
        }
        if self.model.trim().is_empty() {
            return Err(Error::Config("model name is empty".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    /// Reads the API key from the configured variable.
    pub fn api_key(&self) -> Result<Option<String>> {
        let Some(var) = &self.api_key_env else {
            return Ok(None);
        };
        match std::env::var(var) {
            Ok(v) if !v.trim().is_empty() => Ok(Some(v)),
            _ => Err(Error::Config(format!(
                "API key environment variable {var} is not set; export it or remove api_key_env"
            ))),
        }
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.base_url.trim_end_matches('/'), path)
    }
}
