use std::path::Path;
use std::sync::Arc;

use crate::bsm::{build_score_prompt, Embedder, Embedding};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::prompts::{argument_generation_prompt, direct_classification_prompt};
use crate::qbaf::Relation;
use crate::scorer::BaseScorer;

use super::cache::ResponseCache;
use super::config::LlmEndpointConfig;
use super::parse::{classify_completion, parse_arguments, parse_percentage, GeneratedDebate};
use super::transport::{FixtureTransport, HttpTransport, Transport};
use super::ArgumentGenerator;

/// Greedy decoding for scoring and classification.
const GREEDY: f64 = 0.0;

/// Prompts a model through a [`Transport`], caching every completion that
/// parsed.
#[derive(Clone)]
pub struct LlmClient {
    cfg: LlmEndpointConfig,
    transport: Arc<dyn Transport>,
    cache: Option<Arc<ResponseCache>>,
}

impl LlmClient {
    pub fn new(
        cfg: LlmEndpointConfig,
        transport: Arc<dyn Transport>,
        cache: Option<Arc<ResponseCache>>,
    ) -> Result<Self> {
        cfg.validate()?;
        Ok(LlmClient {
            cfg,
            transport,
            cache,
        })
    }

    pub fn http(cfg: LlmEndpointConfig, cache: Option<Arc<ResponseCache>>) -> Result<Self> {
        let t = HttpTransport::new(cfg.clone())?;
        LlmClient::new(cfg, Arc::new(t), cache)
    }

    pub fn fixtures(
        cfg: LlmEndpointConfig,
        dir: &Path,
        cache: Option<Arc<ResponseCache>>,
    ) -> Result<Self> {
        let t = FixtureTransport::load(dir)?;
        LlmClient::new(cfg, Arc::new(t), cache)
    }

    pub fn config(&self) -> &LlmEndpointConfig {
        &self.cfg
    }

    /// Sends `prompt` at most `attempts` times until `parse` accepts the
    /// completion. Only accepted completions are cached.
    fn complete<T>(
        &self,
        prompt: &str,
        temperature: f64,
        attempts: usize,
        parse: impl Fn(&str) -> Result<T>,
    ) -> Result<T> {
        let model = &self.cfg.model;
        if let Some(raw) = self.cache.as_ref().and_then(|c| c.get(model, prompt, temperature)) {
            if let Ok(v) = parse(&raw) {
                return Ok(v);
            }
        }
        let mut last = None;
        for attempt in 0..attempts.max(1) {
            let raw = self.transport.chat(model, prompt, temperature)?;
            match parse(&raw) {
                Ok(v) => {
                    if let Some(c) = &self.cache {
                        c.put(model, prompt, temperature, &raw)?;
                    }
                    return Ok(v);
                }
                Err(e) => {
                    tracing::debug!(attempt, "completion did not parse: {e}");
                    last = Some(e);
                }
            }
        }
        Err(last.expect("at least one attempt"))
    }

    /// Asks for supporting and attacking arguments. A completion that does
    /// not parse is retried once before the parse error surfaces.
    pub fn generate_arguments(&self, claim: &str) -> Result<GeneratedDebate> {
        if claim.trim().is_empty() {
            return Err(Error::InvalidInput("claim text is empty".into()));
        }
        let prompt = argument_generation_prompt(claim);
        self.complete(&prompt, self.cfg.temperature, 2, parse_arguments)
    }

    /// The model's stated confidence that `argument` is valid, in `[0, 1]`.
    pub fn prompt_base_score(&self, claim: &str, argument: &str, relation: Relation) -> Result<f64> {
        let prompt = build_score_prompt(claim, argument, relation)?;
        self.complete(prompt.text(), GREEDY, 1, parse_percentage)
    }

    /// Direct ternary classification without argumentation. Unparseable
    /// completions map to `Uncertain`.
    pub fn direct_classify(&self, claim: &str) -> Result<Label> {
        if claim.trim().is_empty() {
            return Err(Error::InvalidInput("claim text is empty".into()));
        }
        let prompt = direct_classification_prompt(claim);
        self.complete(&prompt, GREEDY, 1, |raw| Ok(classify_completion(raw)))
    }
}

impl ArgumentGenerator for LlmClient {
    fn generate(&self, claim: &str) -> Result<GeneratedDebate> {
        self.generate_arguments(claim)
    }
}

impl BaseScorer for LlmClient {
    fn score(&self, claim: &str, argument: &str, relation: Relation) -> Result<f64> {
        self.prompt_base_score(claim, argument, relation)
    }

    fn name(&self) -> &str {
        "prompted-llm"
    }
}

/// Embeddings from the endpoint's embeddings route.
#[derive(Clone)]
pub struct LlmEmbedder {
    model: String,
    transport: Arc<dyn Transport>,
}

impl LlmEmbedder {
    pub fn new(model: impl Into<String>, transport: Arc<dyn Transport>) -> Self {
        LlmEmbedder {
            model: model.into(),
            transport,
        }
    }
}

impl Embedder for LlmEmbedder {
    fn embed(&self, text: &str) -> Result<Embedding> {
        Embedding::new(self.transport.embed(&self.model, text)?)
    }
}
