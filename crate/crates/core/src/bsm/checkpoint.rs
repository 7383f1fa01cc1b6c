//! Self-describing JSON checkpoints for the regression head.
//!
//! `layer1_weights` is the `d × 256` matrix flattened row-major, so entry
//! `(i, j)` sits at `i * 256 + j`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::head::{BsmParams, HIDDEN};
use super::optim::AdamW;
use super::train::{StepLoss, TrainState, TrainingConfig};

pub const FORMAT: &str = "argverdict-bsm";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResumeState {
    pub optimizer: AdamW,
    pub completed_steps: usize,
    pub trace: Vec<StepLoss>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub d: usize,
    pub hidden: usize,
    pub layer1_weights: Vec<f64>,
    pub layer1_bias: Vec<f64>,
    pub layer2_weights: Vec<f64>,
    pub layer2_bias: f64,
    pub config: TrainingConfig,
    /// Present only for an interrupted phase-two run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resume: Option<ResumeState>,
}

impl Checkpoint {
    pub fn new(params: &BsmParams, config: &TrainingConfig) -> Self {
        Checkpoint {
            format: FORMAT.into(),
            version: VERSION,
            d: params.dim(),
            hidden: HIDDEN,
            layer1_weights: params.w1().to_vec(),
            layer1_bias: params.b1().to_vec(),
            layer2_weights: params.w2().to_vec(),
            layer2_bias: params.b2(),
            config: config.clone(),
            resume: None,
        }
    }

    pub fn from_state(state: &TrainState, config: &TrainingConfig) -> Self {
        Checkpoint {
            resume: Some(ResumeState {
                optimizer: state.optimizer.clone(),
                completed_steps: state.completed_steps,
                trace: state.trace.clone(),
            }),
            ..Checkpoint::new(&state.params, config)
        }
    }

    pub fn params(&self) -> Result<BsmParams> {
        if self.format != FORMAT {
            return Err(Error::Config(format!(
                "not a head checkpoint (format {:?})",
                self.format
            )));
        }
        if self.version != VERSION {
            return Err(Error::Config(format!(
                "unsupported checkpoint version {}",
                self.version
            )));
        }
        if self.hidden != HIDDEN {
            return Err(Error::Config(format!(
                "checkpoint hidden size {} but the head uses {HIDDEN}",
                self.hidden
            )));
        }
        BsmParams::from_parts(
            self.d,
            self.layer1_weights.clone(),
            self.layer1_bias.clone(),
            self.layer2_weights.clone(),
            self.layer2_bias,
        )
    }

    pub fn train_state(&self) -> Result<Option<TrainState>> {
        let Some(r) = &self.resume else {
            return Ok(None);
        };
        Ok(Some(TrainState {
            params: self.params()?,
            optimizer: r.optimizer.clone(),
            completed_steps: r.completed_steps,
            trace: r.trace.clone(),
        }))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}
