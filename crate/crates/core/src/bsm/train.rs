//! Two-phase training of the regression head.
//!
//! Phase one primes the head on supervised `(claim, argument, target)`
//! triples. Phase two scores each debate's leaves, evaluates the claim
//! under DF-QuAD and backpropagates the semantic loss through the semantics
//! into the head, optionally adding the ranking and consistency terms on
//! randomly drawn auxiliary samples. Both phases run one epoch and are
//! deterministic for a fixed seed.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::qbaf::{Relation, NEUTRAL_BASE_SCORE};
use crate::semantics::star_strength_and_gradient;

use super::data::{Debate, ParaphraseGroup, PrimingExample, RankedSet};
use super::embed::{Embedder, Embedding};
use super::head::{BsmParams, HeadGrad};
use super::loss::{consistency_grad, loss_consistency, loss_ranking, ranking_grad};
use super::optim::AdamW;
use super::prompt::build_score_prompt;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingConfig {
    pub lambda_rank: f64,
    pub lambda_con: f64,
    /// Ranking margin `m`.
    pub margin: f64,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Hidden-layer dropout, applied during priming only.
    pub dropout: f64,
    /// Priming minibatch size.
    pub batch_size: usize,
    /// Debates per optimizer step in phase two.
    pub accumulation_steps: usize,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            lambda_rank: 1.0,
            lambda_con: 1.0,
            margin: 0.1,
            learning_rate: 1e-4,
            weight_decay: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            dropout: 0.1,
            batch_size: 8,
            accumulation_steps: 8,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.lambda_rank >= 0.0 && self.lambda_con >= 0.0) {
            return bad("loss weights must be non-negative".into());
        }
        if !(0.0..1.0).contains(&self.margin) {
            return bad(format!("margin {} outside [0, 1)", self.margin));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate {} invalid", self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout {} outside [0, 1)", self.dropout));
        }
        if self.batch_size == 0 || self.accumulation_steps == 0 {
            return bad("batch and accumulation sizes must be positive".into());
        }
        Ok(())
    }

    fn optimizer(&self, n_params: usize) -> AdamW {
        AdamW::new(
            n_params,
            self.learning_rate,
            self.beta1,
            self.beta2,
            self.eps,
            self.weight_decay,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepLoss {
    pub step: usize,
    pub semantic: f64,
    pub ranking: Option<f64>,
    pub consistency: Option<f64>,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: BsmParams,
    pub trace: Vec<StepLoss>,
}

/// Resumable phase-two state as of the last optimizer update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainState {
    pub params: BsmParams,
    pub optimizer: AdamW,
    pub completed_steps: usize,
    pub trace: Vec<StepLoss>,
}

/// Per-run memo of embeddings keyed by prompt text.
struct EmbedMemo<'a> {
    embedder: &'a dyn Embedder,
    memo: HashMap<String, Embedding>,
    dim: usize,
}

impl<'a> EmbedMemo<'a> {
    fn new(embedder: &'a dyn Embedder, dim: usize) -> Self {
        EmbedMemo {
            embedder,
            memo: HashMap::new(),
            dim,
        }
    }

    fn get(&mut self, claim: &str, argument: &str, relation: Relation) -> Result<Embedding> {
        let prompt = build_score_prompt(claim, argument, relation)?;
        if let Some(e) = self.memo.get(prompt.text()) {
            return Ok(e.clone());
        }
        let e = self.embedder.embed(prompt.text())?;
        if e.dim() != self.dim {
            return Err(Error::Config(format!(
                "embedding has dimension {} but the head expects {}",
                e.dim(),
                self.dim
            )));
        }
        self.memo.insert(prompt.text().to_string(), e.clone());
        Ok(e)
    }
}

/// Phase one: minimise `(t̂ − t)²` over the examples for one epoch.
pub fn prime(
    head: &BsmParams,
    examples: &[PrimingExample],
    embedder: &dyn Embedder,
    cfg: &TrainingConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if examples.is_empty() {
        return Err(Error::InvalidInput("priming dataset is empty".into()));
    }
    for ex in examples {
        ex.check().map_err(Error::InvalidInput)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    order.shuffle(&mut rng);

    let mut memo = EmbedMemo::new(embedder, head.dim());
    let mut params = head.clone();
    let mut opt = cfg.optimizer(params.values().len());
    let mut grad = params.zero_grad();
    let mut trace = Vec::new();
    let keep = 1.0 - cfg.dropout;

    for (step, batch) in order.chunks(cfg.batch_size).enumerate() {
        grad.clear();
        let mut batch_loss = 0.0;
        for &i in batch {
            let ex = &examples[i];
            let x = memo.get(&ex.claim, &ex.argument, ex.relation)?;
            let mask = (cfg.dropout > 0.0).then(|| {
                (0..super::head::HIDDEN)
                    .map(|_| if rng.random::<f64>() < keep { 1.0 / keep } else { 0.0 })
                    .collect()
            });
            let act = params.forward_train(x.as_slice(), mask)?;
            let diff = act.output - ex.target;
            batch_loss += diff * diff;
            params.backward(x.as_slice(), &act, 2.0 * diff, &mut grad);
        }
        let n = batch.len() as f64;
        grad.scale(1.0 / n);
        opt.step(&mut params, &grad);
        trace.push(StepLoss {
            step,
            semantic: 0.0,
            ranking: None,
            consistency: None,
            total: batch_loss / n,
        });
    }
    Ok(TrainOutcome { params, trace })
}

/// Semantic loss of one debate and its gradient with respect to the head
/// parameters, chained through the DF-QuAD claim strength.
pub fn semantic_loss_and_grad(
    params: &BsmParams,
    supports: &[&[f64]],
    attacks: &[&[f64]],
    gold: Label,
) -> Result<(f64, HeadGrad)> {
    let mut grad = params.zero_grad();
    let loss = semantic_step(params, supports, attacks, gold, 1.0, &mut grad)?;
    Ok((loss, grad))
}

fn semantic_step(
    params: &BsmParams,
    supports: &[&[f64]],
    attacks: &[&[f64]],
    gold: Label,
    weight: f64,
    grad: &mut HeadGrad,
) -> Result<f64> {
    let sup_acts = supports
        .iter()
        .map(|x| params.forward_train(x, None))
        .collect::<Result<Vec<_>>>()?;
    let att_acts = attacks
        .iter()
        .map(|x| params.forward_train(x, None))
        .collect::<Result<Vec<_>>>()?;
    let sup_scores: Vec<f64> = sup_acts.iter().map(|a| a.output).collect();
    let att_scores: Vec<f64> = att_acts.iter().map(|a| a.output).collect();
    let (strength, d_sup, d_att) =
        star_strength_and_gradient(NEUTRAL_BASE_SCORE, &sup_scores, &att_scores);
    let residual = strength - gold.target_strength();
    let d_strength = 2.0 * residual * weight;
    for ((x, act), d) in supports.iter().zip(&sup_acts).zip(d_sup) {
        params.backward(x, act, d_strength * d, grad);
    }
    for ((x, act), d) in attacks.iter().zip(&att_acts).zip(d_att) {
        params.backward(x, act, d_strength * d, grad);
    }
    Ok(residual * residual)
}

/// Scores a member list and adds `weight · ∂L/∂θ` for the auxiliary loss
/// selected by `kind`.
fn auxiliary_step(
    params: &BsmParams,
    xs: &[Embedding],
    kind: Aux,
    margin: f64,
    weight: f64,
    grad: &mut HeadGrad,
) -> Result<f64> {
    let acts = xs
        .iter()
        .map(|x| params.forward_train(x.as_slice(), None))
        .collect::<Result<Vec<_>>>()?;
    let scores: Vec<f64> = acts.iter().map(|a| a.output).collect();
    let (loss, dl) = match kind {
        Aux::Ranking => (loss_ranking(&scores, margin)?, ranking_grad(&scores, margin)),
        Aux::Consistency => (loss_consistency(&scores)?, consistency_grad(&scores)),
    };
    if weight != 0.0 {
        for ((x, act), d) in xs.iter().zip(&acts).zip(dl) {
            params.backward(x.as_slice(), act, weight * d, grad);
        }
    }
    Ok(loss)
}

#[derive(Clone, Copy)]
enum Aux {
    Ranking,
    Consistency,
}

struct Step {
    debate: usize,
    ranked: Option<usize>,
    paraphrase: Option<usize>,
}

/// One epoch's visiting order plus the auxiliary samples drawn at each
/// step. Depends only on the seed and the dataset sizes.
fn schedule(seed: u64, n_debates: usize, n_ranked: usize, n_para: usize) -> Vec<Step> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n_debates).collect();
    order.shuffle(&mut rng);
    order
        .into_iter()
        .map(|debate| Step {
            debate,
            ranked: (n_ranked > 0).then(|| rng.random_range(0..n_ranked)),
            paraphrase: (n_para > 0).then(|| rng.random_range(0..n_para)),
        })
        .collect()
}

/// Phase two: one epoch over the debates under
/// `L_sem + λ_rank L_rank + λ_con L_con`.
pub fn train_phase2(
    head: &BsmParams,
    debates: &[Debate],
    ranked: &[RankedSet],
    paraphrases: &[ParaphraseGroup],
    embedder: &dyn Embedder,
    cfg: &TrainingConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    let state = TrainState {
        params: head.clone(),
        optimizer: cfg.optimizer(head.values().len()),
        completed_steps: 0,
        trace: Vec::new(),
    };
    train_phase2_resume(state, debates, ranked, paraphrases, embedder, cfg)
}

/// Continues phase two from a state captured by an interrupted run. The
/// schedule is regenerated from the seed, so the resumed run matches an
/// uninterrupted one.
pub fn train_phase2_resume(
    state: TrainState,
    debates: &[Debate],
    ranked: &[RankedSet],
    paraphrases: &[ParaphraseGroup],
    embedder: &dyn Embedder,
    cfg: &TrainingConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if debates.is_empty() {
        return Err(Error::InvalidInput("no debates to train on".into()));
    }
    for d in debates {
        d.check().map_err(Error::InvalidInput)?;
    }
    let plan = schedule(cfg.seed, debates.len(), ranked.len(), paraphrases.len());
    if state.completed_steps > plan.len() {
        return Err(Error::InvalidInput(format!(
            "checkpoint has {} completed steps but the epoch has {}",
            state.completed_steps,
            plan.len()
        )));
    }

    let TrainState {
        mut params,
        mut optimizer,
        completed_steps,
        mut trace,
    } = state;
    let mut memo = EmbedMemo::new(embedder, params.dim());
    let mut grad = params.zero_grad();
    let mut window_start = completed_steps;

    for (step_idx, step) in plan.iter().enumerate().skip(completed_steps) {
        let result = run_step(&params, step, debates, ranked, paraphrases, &mut memo, cfg, &mut grad);
        let loss = match result {
            Ok(l) => l,
            Err(e) => {
                trace.truncate(window_start);
                return Err(Error::Interrupted {
                    completed_steps: window_start,
                    checkpoint: Box::new(TrainState {
                        params,
                        optimizer,
                        completed_steps: window_start,
                        trace,
                    }),
                    source: Box::new(e),
                });
            }
        };
        trace.push(StepLoss {
            step: step_idx,
            ..loss
        });
        let in_window = step_idx + 1 - window_start;
        if in_window == cfg.accumulation_steps || step_idx + 1 == plan.len() {
            grad.scale(1.0 / in_window as f64);
            optimizer.step(&mut params, &grad);
            grad.clear();
            window_start = step_idx + 1;
        }
    }
    Ok(TrainOutcome { params, trace })
}

#[allow(clippy::too_many_arguments)]
fn run_step(
    params: &BsmParams,
    step: &Step,
    debates: &[Debate],
    ranked: &[RankedSet],
    paraphrases: &[ParaphraseGroup],
    memo: &mut EmbedMemo<'_>,
    cfg: &TrainingConfig,
    grad: &mut HeadGrad,
) -> Result<StepLoss> {
    let d = &debates[step.debate];
    let sup = d
        .supports
        .iter()
        .map(|a| memo.get(&d.claim, a, Relation::Support))
        .collect::<Result<Vec<_>>>()?;
    let att = d
        .attacks
        .iter()
        .map(|a| memo.get(&d.claim, a, Relation::Attack))
        .collect::<Result<Vec<_>>>()?;
    let sup_x: Vec<&[f64]> = sup.iter().map(Embedding::as_slice).collect();
    let att_x: Vec<&[f64]> = att.iter().map(Embedding::as_slice).collect();
    let semantic = semantic_step(params, &sup_x, &att_x, d.label, 1.0, grad)?;

    let ranking = match step.ranked {
        Some(i) => {
            let set = &ranked[i];
            let xs = set
                .members
                .iter()
                .map(|m| memo.get(&set.claim, m, set.relation))
                .collect::<Result<Vec<_>>>()?;
            Some(auxiliary_step(params, &xs, Aux::Ranking, cfg.margin, cfg.lambda_rank, grad)?)
        }
        None => None,
    };
    let consistency = match step.paraphrase {
        Some(i) => {
            let group = &paraphrases[i];
            let xs = group
                .members
                .iter()
                .map(|m| memo.get(&group.claim, m, group.relation))
                .collect::<Result<Vec<_>>>()?;
            Some(auxiliary_step(params, &xs, Aux::Consistency, cfg.margin, cfg.lambda_con, grad)?)
        }
        None => None,
    };
    let total = semantic
        + cfg.lambda_rank * ranking.unwrap_or(0.0)
        + cfg.lambda_con * consistency.unwrap_or(0.0);
    Ok(StepLoss {
        step: 0,
        semantic,
        ranking,
        consistency,
        total,
    })
}
