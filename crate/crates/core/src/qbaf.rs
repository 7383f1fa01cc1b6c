//! Claim-centred quantitative bipolar argumentation frameworks.
//!
//! A [`Qbaf`] holds the claim argument, the generated supporting and
//! attacking arguments, the two relations and the base scores. The builder
//! [`build_ita_qbaf`] produces the depth-1 star used for verification; the
//! type itself admits arbitrary acyclic graphs so the semantics can be
//! exercised on deeper structures.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base score of the claim argument and the default for unscored leaves.
pub const NEUTRAL_BASE_SCORE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Claim,
    Support,
    Attack,
}

/// Relation of a leaf argument to the claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Support,
    Attack,
}

impl Relation {
    pub fn is_support(self) -> bool {
        matches!(self, Relation::Support)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Argument {
    pub id: String,
    pub text: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimRef {
    pub id: String,
    pub text: String,
}

/// A QBAF centred on one claim. Immutable once built; score updates return
/// a new value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Qbaf {
    claim: ClaimRef,
    arguments: Vec<Argument>,
    attacks: Vec<(String, String)>,
    supports: Vec<(String, String)>,
    base_scores: BTreeMap<String, f64>,
}

pub const CLAIM_ID: &str = "c";

/// Builds the star `⟨A_c, R⁺_c, R⁻_c⟩` with every leaf pointing at the claim.
/// Leaf base scores start unset and read as 0.5 until a scorer fills them.
pub fn build_ita_qbaf<S: AsRef<str>, T: AsRef<str>>(
    claim_text: &str,
    supports: &[S],
    attacks: &[T],
) -> Result<Qbaf> {
    if claim_text.trim().is_empty() {
        return Err(Error::InvalidInput("claim text is empty".into()));
    }
    let mut arguments = Vec::with_capacity(1 + supports.len() + attacks.len());
    arguments.push(Argument {
        id: CLAIM_ID.to_string(),
        text: claim_text.to_string(),
        role: Role::Claim,
    });
    let mut support_edges = Vec::with_capacity(supports.len());
    for (i, s) in supports.iter().enumerate() {
        let text = s.as_ref();
        if text.trim().is_empty() {
            return Err(Error::InvalidInput(format!("support argument {i} is empty")));
        }
        let id = format!("s{}", i + 1);
        support_edges.push((id.clone(), CLAIM_ID.to_string()));
        arguments.push(Argument {
            id,
            text: text.to_string(),
            role: Role::Support,
        });
    }
    let mut attack_edges = Vec::with_capacity(attacks.len());
    for (i, t) in attacks.iter().enumerate() {
        let text = t.as_ref();
        if text.trim().is_empty() {
            return Err(Error::InvalidInput(format!("attack argument {i} is empty")));
        }
        let id = format!("t{}", i + 1);
        attack_edges.push((id.clone(), CLAIM_ID.to_string()));
        arguments.push(Argument {
            id,
            text: text.to_string(),
            role: Role::Attack,
        });
    }
    let mut base_scores = BTreeMap::new();
    base_scores.insert(CLAIM_ID.to_string(), NEUTRAL_BASE_SCORE);
    Ok(Qbaf {
        claim: ClaimRef {
            id: CLAIM_ID.to_string(),
            text: claim_text.to_string(),
        },
        arguments,
        attacks: attack_edges,
        supports: support_edges,
        base_scores,
    })
}

impl Qbaf {
    /// Assembles a framework from raw parts without checking invariants;
    /// call [`Qbaf::validate`] before evaluating it.
    pub fn from_parts(
        claim: ClaimRef,
        arguments: Vec<Argument>,
        attacks: Vec<(String, String)>,
        supports: Vec<(String, String)>,
        base_scores: BTreeMap<String, f64>,
    ) -> Self {
        Qbaf {
            claim,
            arguments,
            attacks,
            supports,
            base_scores,
        }
    }

    pub fn claim(&self) -> &ClaimRef {
        &self.claim
    }

    pub fn claim_id(&self) -> &str {
        &self.claim.id
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn attacks(&self) -> &[(String, String)] {
        &self.attacks
    }

    pub fn supports(&self) -> &[(String, String)] {
        &self.supports
    }

    pub fn base_scores(&self) -> &BTreeMap<String, f64> {
        &self.base_scores
    }

    pub fn argument(&self, id: &str) -> Option<&Argument> {
        self.arguments.iter().find(|a| a.id == id)
    }

    /// Base score of `id`, with unscored arguments reading as 0.5.
    pub fn base_score(&self, id: &str) -> f64 {
        self.base_scores
            .get(id)
            .copied()
            .unwrap_or(NEUTRAL_BASE_SCORE)
    }

    /// Non-claim arguments in insertion order.
    pub fn leaves(&self) -> impl Iterator<Item = &Argument> {
        self.arguments.iter().filter(|a| a.role != Role::Claim)
    }

    /// True when every edge targets the claim and originates at a non-claim
    /// argument.
    pub fn is_star(&self) -> bool {
        let claim = self.claim_id();
        self.attacks
            .iter()
            .chain(&self.supports)
            .all(|(from, to)| to == claim && from != claim)
    }

    /// Returns a copy with the given leaf scores replaced.
    pub fn set_base_scores(&self, scores: &BTreeMap<String, f64>) -> Result<Qbaf> {
        for (id, &value) in scores {
            if id == self.claim_id() {
                return Err(Error::InvalidTarget(format!(
                    "the claim argument {id:?} is not scored; its base score is fixed at 0.5"
                )));
            }
            if self.argument(id).is_none() {
                return Err(Error::InvalidTarget(format!("no argument with id {id:?}")));
            }
            crate::error::check_unit("base score", value)?;
        }
        let mut next = self.clone();
        for (id, &value) in scores {
            next.base_scores.insert(id.clone(), value);
        }
        Ok(next)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Qbaf> {
        Ok(serde_json::from_str(s)?)
    }

    /// Checks every structural invariant. An empty result means the
    /// framework is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        for a in &self.arguments {
            if !seen.insert(a.id.as_str()) {
                out.push(Violation::new(
                    ViolationKind::DuplicateId,
                    [a.id.clone()],
                    "argument id used more than once",
                ));
            }
            if a.text.trim().is_empty() {
                out.push(Violation::new(
                    ViolationKind::EmptyText,
                    [a.id.clone()],
                    "argument text is empty",
                ));
            }
        }

        let claims: Vec<&Argument> = self
            .arguments
            .iter()
            .filter(|a| a.role == Role::Claim)
            .collect();
        if claims.len() != 1 {
            out.push(Violation::new(
                ViolationKind::ClaimCount,
                claims.iter().map(|a| a.id.clone()),
                format!("expected exactly one claim argument, found {}", claims.len()),
            ));
        } else if claims[0].id != self.claim.id || claims[0].text != self.claim.text {
            out.push(Violation::new(
                ViolationKind::ClaimMismatch,
                [self.claim.id.clone(), claims[0].id.clone()],
                "claim header does not match the claim argument",
            ));
        }

        for (id, &value) in &self.base_scores {
            if !seen.contains(id.as_str()) {
                out.push(Violation::new(
                    ViolationKind::UnknownScoredId,
                    [id.clone()],
                    "base score for an argument that does not exist",
                ));
            }
            if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
                out.push(Violation::new(
                    ViolationKind::ScoreOutOfRange,
                    [id.clone()],
                    format!("base score {value} outside [0, 1]"),
                ));
            }
        }
        if let Some(&v) = self.base_scores.get(self.claim_id()) {
            if v != NEUTRAL_BASE_SCORE {
                out.push(Violation::new(
                    ViolationKind::ClaimPrior,
                    [self.claim.id.clone()],
                    format!("claim base score must be the neutral prior 0.5, got {v}"),
                ));
            }
        }

        let mut dangling = false;
        for (kind, edges) in [("attack", &self.attacks), ("support", &self.supports)] {
            for (from, to) in edges.iter() {
                let missing: Vec<String> = [from, to]
                    .into_iter()
                    .filter(|id| !seen.contains(id.as_str()))
                    .cloned()
                    .collect();
                if !missing.is_empty() {
                    dangling = true;
                    out.push(Violation::new(
                        ViolationKind::DanglingEdge,
                        missing,
                        format!("{kind} edge ({from}, {to}) references a missing argument"),
                    ));
                }
            }
        }

        let attack_set: HashSet<&(String, String)> = self.attacks.iter().collect();
        for e in &self.supports {
            if attack_set.contains(e) {
                out.push(Violation::new(
                    ViolationKind::OverlappingRelations,
                    [e.0.clone(), e.1.clone()],
                    "edge is both an attack and a support",
                ));
            }
        }

        if !dangling {
            if let Some(cycle) = self.find_cycle() {
                out.push(Violation::new(
                    ViolationKind::Cycle,
                    cycle,
                    "relation graph contains a cycle",
                ));
            }
        }
        out
    }

    /// Topological order (every argument after all of its attackers and
    /// supporters), or the ids on a cycle.
    pub(crate) fn topological_order(&self) -> std::result::Result<Vec<&str>, Vec<String>> {
        let ids: Vec<&str> = self.arguments.iter().map(|a| a.id.as_str()).collect();
        let mut indegree: HashMap<&str, usize> = ids.iter().map(|&id| (id, 0)).collect();
        let mut children: HashMap<&str, Vec<&str>> = HashMap::new();
        for (from, to) in self.attacks.iter().chain(&self.supports) {
            if let Some(d) = indegree.get_mut(to.as_str()) {
                *d += 1;
            }
            children.entry(from.as_str()).or_default().push(to.as_str());
        }
        let mut ready: Vec<&str> = ids.iter().copied().filter(|id| indegree[id] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(ids.len());
        while let Some(id) = ready.pop() {
            order.push(id);
            if let Some(next) = children.get(id) {
                for &c in next {
                    if let Some(d) = indegree.get_mut(c) {
                        *d -= 1;
                        if *d == 0 {
                            ready.push(c);
                        }
                    }
                }
            }
        }
        if order.len() == ids.len() {
            Ok(order)
        } else {
            let done: BTreeSet<&str> = order.iter().copied().collect();
            Err(ids
                .into_iter()
                .filter(|id| !done.contains(id))
                .map(str::to_string)
                .collect())
        }
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        self.topological_order().err()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    EmptyText,
    DuplicateId,
    ClaimCount,
    ClaimMismatch,
    ScoreOutOfRange,
    UnknownScoredId,
    ClaimPrior,
    DanglingEdge,
    OverlappingRelations,
    Cycle,
}

impl ViolationKind {
    pub fn invariant(self) -> &'static str {
        match self {
            ViolationKind::EmptyText => "non-empty-text",
            ViolationKind::DuplicateId => "unique-ids",
            ViolationKind::ClaimCount => "single-claim",
            ViolationKind::ClaimMismatch => "claim-header",
            ViolationKind::ScoreOutOfRange => "score-range",
            ViolationKind::UnknownScoredId => "scored-id-exists",
            ViolationKind::ClaimPrior => "neutral-prior",
            ViolationKind::DanglingEdge => "dangling-edge",
            ViolationKind::OverlappingRelations => "disjoint-relations",
            ViolationKind::Cycle => "acyclic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ids: Vec<String>,
    pub message: String,
}

impl Violation {
    fn new(
        kind: ViolationKind,
        ids: impl IntoIterator<Item = String>,
        message: impl Into<String>,
    ) -> Self {
        Violation {
            kind,
            ids: ids.into_iter().collect(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} (ids: {})",
            self.kind.invariant(),
            self.message,
            self.ids.join(", ")
        )
    }
}
