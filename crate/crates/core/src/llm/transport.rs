//! Wire access to completion and embedding endpoints.

use std::collections::HashMap;
use std::path::Path;
use std::thread;
use std::time::Duration;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jsonl;

use super::cache::cache_key;
use super::config::LlmEndpointConfig;

pub trait Transport: Send + Sync {
    fn chat(&self, model: &str, prompt: &str, temperature: f64) -> Result<String>;

    fn embed(&self, model: &str, input: &str) -> Result<Vec<f64>>;
}

/// Blocking HTTP transport speaking the common chat-completions and
/// embeddings JSON shapes.
pub struct HttpTransport {
    cfg: LlmEndpointConfig,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
}

enum Failure {
    Retry(String),
    Fatal(String),
}

impl HttpTransport {
    pub fn new(cfg: LlmEndpointConfig) -> Result<Self> {
        cfg.validate()?;
        let api_key = cfg.api_key()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout())
            .build()
            .map_err(|e| Error::Config(format!("HTTP client: {e}")))?;
        Ok(HttpTransport {
            cfg,
            api_key,
            client,
        })
    }

    fn post_once(&self, url: &str, body: &Value) -> std::result::Result<Value, Failure> {
        let mut req = self.client.post(url).json(body);
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| Failure::Retry(format!("{url}: {e}")))?;
        let status = resp.status();
        if status.is_success() {
            return resp
                .json::<Value>()
                .map_err(|e| Failure::Fatal(format!("{url}: invalid JSON response: {e}")));
        }
        let text = resp.text().unwrap_or_default();
        let msg = format!("{url}: HTTP {status}: {}", text.chars().take(300).collect::<String>());
        if status.is_server_error() || status.as_u16() == 429 || status.as_u16() == 408 {
            Err(Failure::Retry(msg))
        } else {
            Err(Failure::Fatal(msg))
        }
    }

    fn post(&self, path: &str, body: Value) -> Result<Value> {
        let url = self.cfg.url(path);
        let mut attempt = 0;
        loop {
            match self.post_once(&url, &body) {
                Ok(v) => return Ok(v),
                Err(Failure::Fatal(m)) => return Err(Error::Transport(m)),
                Err(Failure::Retry(m)) if attempt >= self.cfg.retries => {
                    return Err(Error::Transport(format!(
                        "{m} (gave up after {} attempts)",
                        attempt + 1
                    )))
                }
                Err(Failure::Retry(m)) => {
                    let wait = self.cfg.backoff_ms.saturating_mul(1 << attempt.min(16));
                    tracing::warn!(attempt, wait_ms = wait, "request failed, retrying: {m}");
                    thread::sleep(Duration::from_millis(wait));
                    attempt += 1;
                }
            }
        }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    content: Option<String>,
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingItem>,
}

#[derive(Deserialize)]
struct EmbeddingItem {
    embedding: Vec<f64>,
}

impl Transport for HttpTransport {
    fn chat(&self, model: &str, prompt: &str, temperature: f64) -> Result<String> {
        let body = json!({
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
            "max_tokens": self.cfg.max_tokens,
        });
        let v = self.post(&self.cfg.chat_path, body)?;
        let resp: ChatResponse = serde_json::from_value(v)
            .map_err(|e| Error::Transport(format!("unexpected chat response shape: {e}")))?;
        resp.choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| Error::Transport("chat response has no message content".into()))
    }

    fn embed(&self, model: &str, input: &str) -> Result<Vec<f64>> {
        let v = self.post(&self.cfg.embeddings_path, json!({"model": model, "input": input}))?;
        let resp: EmbeddingResponse = serde_json::from_value(v)
            .map_err(|e| Error::Transport(format!("unexpected embedding response shape: {e}")))?;
        resp.data
            .into_iter()
            .next()
            .map(|d| d.embedding)
            .ok_or_else(|| Error::Transport("embedding response has no data".into()))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChatRecord {
    prompt: String,
    completion: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingRecord {
    input: String,
    embedding: Vec<f64>,
}

/// Recorded responses, looked up by exact prompt text.
///
/// A fixture directory holds `chat.jsonl` (`{"prompt", "completion"}`) and
/// optionally `embeddings.jsonl` (`{"input", "embedding"}`).
#[derive(Debug, Default, Clone)]
pub struct FixtureTransport {
    chat: HashMap<String, String>,
    embeddings: HashMap<String, Vec<f64>>,
}

impl FixtureTransport {
    pub fn load(dir: &Path) -> Result<Self> {
        if !dir.is_dir() {
            return Err(Error::Config(format!(
                "fixture directory {} does not exist",
                dir.display()
            )));
        }
        let mut f = FixtureTransport::default();
        let chat = dir.join("chat.jsonl");
        if chat.exists() {
            for r in jsonl::read::<ChatRecord>(&chat)? {
                f.chat.insert(r.prompt, r.completion);
            }
        }
        let emb = dir.join("embeddings.jsonl");
        if emb.exists() {
            for r in jsonl::read::<EmbeddingRecord>(&emb)? {
                f.embeddings.insert(r.input, r.embedding);
            }
        }
        Ok(f)
    }

    pub fn insert_chat(&mut self, prompt: impl Into<String>, completion: impl Into<String>) {
        self.chat.insert(prompt.into(), completion.into());
    }

    pub fn insert_embedding(&mut self, input: impl Into<String>, embedding: Vec<f64>) {
        self.embeddings.insert(input.into(), embedding);
    }
}

impl Transport for FixtureTransport {
    fn chat(&self, model: &str, prompt: &str, temperature: f64) -> Result<String> {
        self.chat.get(prompt).cloned().ok_or_else(|| {
            Error::Transport(format!(
                "no recorded completion for prompt {}",
                &cache_key(model, prompt, temperature)[..16]
            ))
        })
    }

    fn embed(&self, _model: &str, input: &str) -> Result<Vec<f64>> {
        self.embeddings.get(input).cloned().ok_or_else(|| {
            Error::Transport(format!(
                "no recorded embedding for input starting {:?}",
                input.chars().take(40).collect::<String>()
            ))
        })
    }
}
