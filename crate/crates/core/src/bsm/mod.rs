//! Base score model: a frozen embedding of the base-score prompt followed by
//! a trainable two-layer regression head.

pub mod checkpoint;
pub mod data;
pub mod embed;
pub mod head;
pub mod loss;
pub mod optim;
pub mod prompt;
pub mod train;

pub use checkpoint::Checkpoint;
pub use data::{Debate, ParaphraseGroup, PrimingExample, RankedSet};
pub use embed::{CachedEmbedder, Embedder, Embedding};
pub use head::{BsmParams, HeadGrad, HIDDEN};
pub use loss::{loss_consistency, loss_priming, loss_ranking, loss_semantic, loss_total};
pub use optim::AdamW;
pub use prompt::{build_score_prompt, ScorePrompt};
pub use train::{
    prime, semantic_loss_and_grad, train_phase2, train_phase2_resume, StepLoss, TrainOutcome,
    TrainState, TrainingConfig,
};

use crate::error::Result;
use crate::qbaf::Relation;
use crate::scorer::BaseScorer;

/// `f_reg(embed(prompt(claim, argument, relation)))`.
pub fn score(
    claim: &str,
    argument: &str,
    relation: Relation,
    params: &BsmParams,
    embedder: &dyn Embedder,
) -> Result<f64> {
    let prompt = build_score_prompt(claim, argument, relation)?;
    let x = embedder.embed(prompt.text())?;
    params.forward(x.as_slice())
}

/// A trained head paired with its embedding source.
pub struct BsmScorer<E> {
    params: BsmParams,
    embedder: E,
}

impl<E: Embedder> BsmScorer<E> {
    pub fn new(params: BsmParams, embedder: E) -> Self {
        BsmScorer { params, embedder }
    }

    pub fn params(&self) -> &BsmParams {
        &self.params
    }
}

impl<E: Embedder> BaseScorer for BsmScorer<E> {
    fn score(&self, claim: &str, argument: &str, relation: Relation) -> Result<f64> {
        score(claim, argument, relation, &self.params, &self.embedder)
    }

    fn name(&self) -> &str {
        "trained-bsm"
    }
}
