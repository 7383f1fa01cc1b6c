//! Evaluation: datasets, metrics with bootstrap intervals, scorer
//! diagnostics and end-to-end pipeline runs.

pub mod bootstrap;
pub mod diagnostics;
pub mod metrics;
pub mod pipeline;

pub use bootstrap::{bootstrap_ci, percentile_ci, BootstrapConfig, Interval};
pub use diagnostics::{inconsistency, ranking_agreement, spearman};
pub use metrics::{
    accuracy, balanced_accuracy, load_claims, per_class_recall, ClaimRecord, ConfusionMatrix,
    Outcome,
};
pub use pipeline::{
    audit_run, run_pipeline, verify_claim, write_artifacts, ClaimInput, EvalRecord,
    PipelineOptions, PipelineOutput,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub n: usize,
    pub accuracy: Interval,
    pub balanced_accuracy: Interval,
    pub per_class_recall: BTreeMap<String, f64>,
    pub confusion: ConfusionMatrix,
    pub n_resamples: usize,
    pub level: f64,
    pub seed: u64,
}

/// Accuracy and balanced accuracy with BCa intervals.
pub fn metric_report(outcomes: &[Outcome], cfg: BootstrapConfig) -> Result<MetricReport> {
    let recall = per_class_recall(outcomes)?;
    let acc = bootstrap_ci(outcomes, |s| accuracy(s).unwrap_or(f64::NAN), cfg)?;
    let bal = bootstrap_ci(outcomes, |s| balanced_accuracy(s).unwrap_or(f64::NAN), cfg)?;
    Ok(MetricReport {
        n: outcomes.len(),
        accuracy: acc,
        balanced_accuracy: bal,
        per_class_recall: recall.into_iter().map(|(l, r)| (l.to_string(), r)).collect(),
        confusion: ConfusionMatrix::from_outcomes(outcomes),
        n_resamples: cfg.n_resamples,
        level: cfg.level,
        seed: cfg.seed,
    })
}
