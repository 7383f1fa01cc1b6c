//! End-to-end claim verification: generate a debate, score its arguments,
//! evaluate the framework and threshold the claim strength.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonl;
use crate::label::{Label, Thresholds};
use crate::llm::ArgumentGenerator;
use crate::qbaf::{build_ita_qbaf, Qbaf, Relation, Role};
use crate::scorer::BaseScorer;
use crate::semantics::{evaluate_with, StrengthReport};

/// Share of failed claims above which a run counts as failed.
pub const MAX_FAILURE_RATE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimInput {
    pub id: String,
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub index: usize,
    pub id: String,
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<Label>,
    pub predicted: Label,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimArtifact {
    pub record: EvalRecord,
    pub qbaf: Qbaf,
    pub report: StrengthReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineFailure {
    pub index: usize,
    pub id: String,
    pub claim: String,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOutput {
    pub results: Vec<ClaimArtifact>,
    pub failures: Vec<PipelineFailure>,
}

impl PipelineOutput {
    pub fn total(&self) -> usize {
        self.results.len() + self.failures.len()
    }

    pub fn failure_rate(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.failures.len() as f64 / self.total() as f64
        }
    }

    pub fn exceeds_failure_budget(&self) -> bool {
        self.failure_rate() > MAX_FAILURE_RATE
    }

    pub fn records(&self) -> Vec<EvalRecord> {
        self.results.iter().map(|a| a.record.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub parallelism: usize,
    pub thresholds: Thresholds,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            parallelism: 1,
            thresholds: Thresholds::default(),
        }
    }
}

/// Builds and evaluates the framework for one claim.
pub fn verify_claim(
    claim: &str,
    generator: &dyn ArgumentGenerator,
    scorer: &dyn BaseScorer,
    thresholds: &Thresholds,
) -> Result<(Qbaf, StrengthReport)> {
    let debate = generator.generate(claim)?;
    let q = build_ita_qbaf(claim, &debate.supports, &debate.attacks)?;
    let mut scores = BTreeMap::new();
    for a in q.leaves() {
        let relation = match a.role {
            Role::Support => Relation::Support,
            _ => Relation::Attack,
        };
        scores.insert(a.id.clone(), scorer.score(claim, &a.text, relation)?);
    }
    let q = q.set_base_scores(&scores)?;
    let report = evaluate_with(&q, thresholds)?;
    Ok((q, report))
}

/// Runs every claim, up to `parallelism` at a time. Output order follows
/// input order; per-claim failures are collected rather than raised.
pub fn run_pipeline(
    claims: &[ClaimInput],
    generator: &dyn ArgumentGenerator,
    scorer: &dyn BaseScorer,
    opts: &PipelineOptions,
) -> Result<PipelineOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<(Qbaf, StrengthReport)>> = pool.install(|| {
        claims
            .par_iter()
            .map(|c| verify_claim(&c.claim, generator, scorer, &opts.thresholds))
            .collect()
    });

    let mut out = PipelineOutput::default();
    for (index, (c, outcome)) in claims.iter().zip(outcomes).enumerate() {
        match outcome {
            Ok((qbaf, report)) => out.results.push(ClaimArtifact {
                record: EvalRecord {
                    index,
                    id: c.id.clone(),
                    claim: c.claim.clone(),
                    gold: c.gold,
                    predicted: report.verdict,
                    strength: report.claim_strength,
                },
                qbaf,
                report,
            }),
            Err(e) => {
                tracing::warn!(index, id = %c.id, "claim failed: {e}");
                out.failures.push(PipelineFailure {
                    index,
                    id: c.id.clone(),
                    claim: c.claim.clone(),
                    error: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

fn artifact_name(index: usize) -> String {
    format!("{index:05}.json")
}

/// Writes `records.jsonl`, `failures.jsonl`, `qbafs/` and `reports/` under
/// `dir`.
pub fn write_artifacts(dir: &Path, out: &PipelineOutput) -> Result<()> {
    let qdir = dir.join("qbafs");
    let rdir = dir.join("reports");
    fs::create_dir_all(&qdir)?;
    fs::create_dir_all(&rdir)?;
    for a in &out.results {
        let name = artifact_name(a.record.index);
        fs::write(qdir.join(&name), a.qbaf.to_json()?)?;
        fs::write(rdir.join(&name), a.report.to_json()?)?;
    }
    jsonl::write(&dir.join("records.jsonl"), &out.records())?;
    jsonl::write(&dir.join("failures.jsonl"), &out.failures)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// Re-evaluates every stored framework and compares the result with the
/// stored report and record.
pub fn audit_run(dir: &Path, thresholds: &Thresholds) -> Result<AuditSummary> {
    let records: Vec<EvalRecord> = jsonl::read(&dir.join("records.jsonl"))?;
    let mut mismatches = Vec::new();
    for r in &records {
        let name = artifact_name(r.index);
        let q = Qbaf::from_json(&fs::read_to_string(dir.join("qbafs").join(&name))?)?;
        let stored: StrengthReport =
            serde_json::from_str(&fs::read_to_string(dir.join("reports").join(&name))?)?;
        let fresh = evaluate_with(&q, thresholds)?;
        if fresh != stored {
            mismatches.push(format!("{}: report differs from re-evaluation", r.id));
        }
        if fresh.verdict != r.predicted || fresh.claim_strength != r.strength {
            mismatches.push(format!("{}: record differs from re-evaluation", r.id));
        }
    }
    Ok(AuditSummary {
        checked: records.len(),
        mismatches,
    })
}
