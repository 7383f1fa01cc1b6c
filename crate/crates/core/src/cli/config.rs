//! Run configuration merged from a TOML file and command-line flags.
//!
//! Recognised keys:
//!
//! ```toml
//! seed = 0
//! parallelism = 4
//! cache_dir = ".argverdict-cache"
//! fixtures = "fixtures/"          # recorded responses instead of HTTP
//! scorer = "constant-0.5"         # or "prompted-llm", "trained-bsm"
//! checkpoint = "head.json"        # required for trained-bsm
//! delta = 0.3333333333333333
//!
//! [generation]                    # argument generation endpoint
//! [scoring]                       # prompted base scores
//! [embedding]                     # embeddings for the trained head
//! [training]                      # head training hyperparameters
//! [thresholds]                    # honoured only with --override-thresholds
//! lower = 0.3333333333333333
//! upper = 0.6666666666666666
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bsm::TrainingConfig;
use crate::error::{Error, Result};
use crate::label::{LOWER_THRESHOLD, UPPER_THRESHOLD};
use crate::llm::LlmEndpointConfig;
use crate::reward::MAX_DELTA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScorerMode {
    #[serde(rename = "constant-0.5")]
    Constant,
    #[serde(rename = "prompted-llm")]
    PromptedLlm,
    #[serde(rename = "trained-bsm")]
    TrainedBsm,
}

impl ScorerMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScorerMode::Constant => "constant-0.5",
            ScorerMode::PromptedLlm => "prompted-llm",
            ScorerMode::TrainedBsm => "trained-bsm",
        }
    }
}

impl fmt::Display for ScorerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScorerMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "constant-0.5" => Ok(ScorerMode::Constant),
            "prompted-llm" => Ok(ScorerMode::PromptedLlm),
            "trained-bsm" => Ok(ScorerMode::TrainedBsm),
            _ => Err(format!(
                "unknown scorer {s:?} (expected constant-0.5, prompted-llm or trained-bsm)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub lower: f64,
    pub upper: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            lower: LOWER_THRESHOLD,
            upper: UPPER_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub parallelism: usize,
    pub cache_dir: Option<PathBuf>,
    pub fixtures: Option<PathBuf>,
    pub scorer: ScorerMode,
    pub checkpoint: Option<PathBuf>,
    pub delta: f64,
    pub generation: LlmEndpointConfig,
    pub scoring: LlmEndpointConfig,
    pub embedding: LlmEndpointConfig,
    pub training: TrainingConfig,
    pub thresholds: ThresholdConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            parallelism: 4,
            cache_dir: None,
            fixtures: None,
            scorer: ScorerMode::Constant,
            checkpoint: None,
            delta: MAX_DELTA,
            generation: LlmEndpointConfig::default(),
            scoring: LlmEndpointConfig::default(),
            embedding: LlmEndpointConfig::default(),
            training: TrainingConfig::default(),
            thresholds: ThresholdConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.scorer == ScorerMode::TrainedBsm && self.checkpoint.is_none() {
            return Err(Error::Config(
                "scorer trained-bsm needs a checkpoint (--checkpoint or `checkpoint` in the config)"
                    .into(),
            ));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be at least 1".into()));
        }
        self.training.validate()
    }
}
