//! Training resources for the base score model, stored as JSONL.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jsonl;
use crate::label::Label;
use crate::qbaf::Relation;

/// A claim with its generated debate and gold label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Debate {
    pub claim: String,
    pub label: Label,
    #[serde(default)]
    pub supports: Vec<String>,
    #[serde(default)]
    pub attacks: Vec<String>,
}

/// Arguments expected to score in the listed order, strongest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankedSet {
    pub claim: String,
    pub relation: Relation,
    pub members: Vec<String>,
}

/// Paraphrases of one argument, expected to receive the same score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParaphraseGroup {
    pub claim: String,
    pub relation: Relation,
    pub members: Vec<String>,
}

/// A supervised priming example: claim, argument, relation and a target
/// base score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimingExample {
    pub claim: String,
    pub argument: String,
    pub relation: Relation,
    pub target: f64,
}

fn non_empty(what: &str, s: &str) -> std::result::Result<(), String> {
    if s.trim().is_empty() {
        Err(format!("{what} is empty"))
    } else {
        Ok(())
    }
}

impl Debate {
    pub fn check(&self) -> std::result::Result<(), String> {
        non_empty("claim", &self.claim)?;
        for a in self.supports.iter().chain(&self.attacks) {
            non_empty("argument", a)?;
        }
        Ok(())
    }
}

impl RankedSet {
    pub fn check(&self) -> std::result::Result<(), String> {
        non_empty("claim", &self.claim)?;
        if self.members.len() < 2 {
            return Err("a ranked set needs at least 2 members".into());
        }
        let mut seen = HashSet::new();
        for m in &self.members {
            non_empty("member", m)?;
            if !seen.insert(m.as_str()) {
                return Err(format!("duplicate member text {m:?}"));
            }
        }
        Ok(())
    }
}

impl ParaphraseGroup {
    pub fn check(&self) -> std::result::Result<(), String> {
        non_empty("claim", &self.claim)?;
        if self.members.len() < 2 {
            return Err("a paraphrase group needs at least 2 members".into());
        }
        self.members.iter().try_for_each(|m| non_empty("member", m))
    }
}

impl PrimingExample {
    pub fn check(&self) -> std::result::Result<(), String> {
        non_empty("claim", &self.claim)?;
        non_empty("argument", &self.argument)?;
        if !(self.target.is_finite() && (0.0..=1.0).contains(&self.target)) {
            return Err(format!("target {} outside [0, 1]", self.target));
        }
        Ok(())
    }
}

pub fn load_debates(path: &Path) -> Result<Vec<Debate>> {
    jsonl::read_checked(path, Debate::check)
}

pub fn load_ranked_sets(path: &Path) -> Result<Vec<RankedSet>> {
    jsonl::read_checked(path, RankedSet::check)
}

pub fn load_paraphrase_groups(path: &Path) -> Result<Vec<ParaphraseGroup>> {
    jsonl::read_checked(path, ParaphraseGroup::check)
}

pub fn load_priming_examples(path: &Path) -> Result<Vec<PrimingExample>> {
    jsonl::read_checked(path, PrimingExample::check)
}
