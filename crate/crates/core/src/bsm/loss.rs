//! Training objectives for the base score model and their derivatives with
//! respect to the scores they consume.

use crate::error::{check_unit, Error, Result};
use crate::label::Label;

use super::train::TrainingConfig;

/// Squared error between a predicted and a target base score.
pub fn loss_priming(predicted: f64, target: f64) -> Result<f64> {
    check_unit("predicted score", predicted)?;
    check_unit("target score", target)?;
    Ok((predicted - target).powi(2))
}

/// Squared error between the claim strength and the numeric gold label.
pub fn loss_semantic(claim_strength: f64, gold: Label) -> Result<f64> {
    check_unit("claim strength", claim_strength)?;
    Ok((claim_strength - gold.target_strength()).powi(2))
}

/// Population variance of the scores given to one paraphrase group.
pub fn loss_consistency(scores: &[f64]) -> Result<f64> {
    if scores.len() < 2 {
        return Err(Error::InvalidInput(
            "consistency loss needs at least 2 scores".into(),
        ));
    }
    // shifted by the first score so identical inputs give exactly 0
    let n = scores.len() as f64;
    let k = scores[0];
    let m1 = scores.iter().map(|t| t - k).sum::<f64>() / n;
    let m2 = scores.iter().map(|t| (t - k).powi(2)).sum::<f64>() / n;
    Ok((m2 - m1 * m1).max(0.0))
}

/// `∂L_con/∂tᵢ = (2/n)(tᵢ − t̄)`.
pub(crate) fn consistency_grad(scores: &[f64]) -> Vec<f64> {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    scores.iter().map(|t| 2.0 * (t - mean) / n).collect()
}

/// Pairwise margin ranking loss over scores listed strongest-first:
/// `2/(n(n−1)) Σ_{i<j} max(0, m − (tᵢ − tⱼ))`.
pub fn loss_ranking(scores: &[f64], margin: f64) -> Result<f64> {
    let n = scores.len();
    if n < 2 {
        return Err(Error::InvalidInput("ranking loss needs at least 2 scores".into()));
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += (margin - (scores[i] - scores[j])).max(0.0);
        }
    }
    Ok(total * 2.0 / (n * (n - 1)) as f64)
}

pub(crate) fn ranking_grad(scores: &[f64], margin: f64) -> Vec<f64> {
    let n = scores.len();
    let c = 2.0 / (n * (n - 1)) as f64;
    let mut g = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            if margin - (scores[i] - scores[j]) > 0.0 {
                g[i] -= c;
                g[j] += c;
            }
        }
    }
    g
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// `E[L_sem] + λ_rank E[L_rank] + λ_con E[L_con]` with batch means as the
/// expectations. An empty batch contributes 0.
pub fn loss_total(sem: &[f64], rank: &[f64], con: &[f64], cfg: &TrainingConfig) -> Result<f64> {
    if sem.is_empty() && rank.is_empty() && con.is_empty() {
        return Err(Error::InvalidInput("all loss batches are empty".into()));
    }
    Ok(mean(sem) + cfg.lambda_rank * mean(rank) + cfg.lambda_con * mean(con))
}
