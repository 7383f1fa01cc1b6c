//! Scorer diagnostics on paraphrase groups and ranked sets.

use crate::bsm::loss_consistency;
use crate::bsm::{ParaphraseGroup, RankedSet};
use crate::error::{Error, Result};
use crate::scorer::BaseScorer;

/// Mean over groups of the population variance of the member scores.
pub fn inconsistency(groups: &[ParaphraseGroup], scorer: &dyn BaseScorer) -> Result<f64> {
    if groups.is_empty() {
        return Err(Error::InvalidInput("no paraphrase groups".into()));
    }
    let mut total = 0.0;
    for g in groups {
        let scores = g
            .members
            .iter()
            .map(|m| scorer.score(&g.claim, m, g.relation))
            .collect::<Result<Vec<_>>>()?;
        total += loss_consistency(&scores)?;
    }
    Ok(total / groups.len() as f64)
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman correlation: Pearson correlation of average ranks. Zero when
/// either side has no variation.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let n = ra.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

/// Agreement of a score list with an expected strongest-first order.
pub fn order_agreement(scores: &[f64]) -> f64 {
    let expected: Vec<f64> = (0..scores.len()).rev().map(|i| i as f64).collect();
    spearman(&expected, scores)
}

/// Mean Spearman agreement between each set's expected order and the
/// order its scores induce.
pub fn ranking_agreement(sets: &[RankedSet], scorer: &dyn BaseScorer) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::InvalidInput("no ranked sets".into()));
    }
    let mut total = 0.0;
    for s in sets {
        if s.members.len() < 2 {
            return Err(Error::InvalidInput("a ranked set needs at least 2 members".into()));
        }
        let scores = s
            .members
            .iter()
            .map(|m| scorer.score(&s.claim, m, s.relation))
            .collect::<Result<Vec<_>>>()?;
        total += order_agreement(&scores);
    }
    Ok(total / sets.len() as f64)
}
