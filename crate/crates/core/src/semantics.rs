//! DF-QuAD gradual semantics over acyclic QBAFs, plus the analytic
//! derivative of the claim strength with respect to leaf base scores on
//! depth-1 stars.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::label::{Label, Thresholds, Verdict};
use crate::qbaf::{Qbaf, ViolationKind};

/// Probabilistic-sum aggregation `F`: 0 for no inputs, otherwise
/// `1 − ∏(1 − xᵢ)`.
pub fn aggregate(values: &[f64]) -> Result<f64> {
    // running probabilistic sum a ⊕ x = a + x − a·x; exact for a single input
    values.iter().try_fold(0.0, |acc, &x| {
        check_unit("aggregated strength", x)?;
        Ok(acc + x - acc * x)
    })
}

/// Combination rule: moves the base score towards 0 when attack dominates
/// and towards 1 when support dominates.
pub fn combine(tau: f64, v_minus: f64, v_plus: f64) -> Result<f64> {
    check_unit("base score", tau)?;
    check_unit("attack aggregate", v_minus)?;
    check_unit("support aggregate", v_plus)?;
    Ok(combine_unchecked(tau, v_minus, v_plus))
}

fn combine_unchecked(tau: f64, v_minus: f64, v_plus: f64) -> f64 {
    if v_minus == v_plus {
        tau
    } else if v_minus > v_plus {
        tau * (1.0 - (v_minus - v_plus))
    } else {
        tau + (1.0 - tau) * (v_plus - v_minus)
    }
}

/// Result of evaluating a QBAF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrengthReport {
    pub strengths: BTreeMap<String, f64>,
    pub claim_strength: f64,
    pub verdict: Label,
    /// ∂σ(claim)/∂τ(leaf). Empty for frameworks that are not depth-1 stars.
    pub gradient: BTreeMap<String, f64>,
}

impl StrengthReport {
    pub fn verdict(&self) -> Verdict {
        Verdict {
            label: self.verdict,
            strength: self.claim_strength,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Evaluates `q` under DF-QuAD with the fixed verdict thresholds.
pub fn evaluate(q: &Qbaf) -> Result<StrengthReport> {
    evaluate_with(q, &Thresholds::default())
}

pub fn evaluate_with(q: &Qbaf, thresholds: &Thresholds) -> Result<StrengthReport> {
    let violations = q.validate();
    if let Some(cycle) = violations.iter().find(|v| v.kind == ViolationKind::Cycle) {
        return Err(Error::UnsupportedStructure(format!(
            "cyclic relation graph through {}",
            cycle.ids.join(", ")
        )));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidQbaf(violations));
    }
    let order = q
        .topological_order()
        .map_err(|ids| Error::UnsupportedStructure(format!("cycle through {}", ids.join(", "))))?;

    let mut attackers: HashMap<&str, Vec<&str>> = HashMap::new();
    let mut supporters: HashMap<&str, Vec<&str>> = HashMap::new();
    for (from, to) in q.attacks() {
        attackers.entry(to).or_default().push(from);
    }
    for (from, to) in q.supports() {
        supporters.entry(to).or_default().push(from);
    }

    let mut strengths: BTreeMap<String, f64> = BTreeMap::new();
    for id in order {
        let force = |edges: Option<&Vec<&str>>| -> Result<f64> {
            let vals: Vec<f64> = edges
                .map(|v| v.iter().map(|b| strengths[*b]).collect())
                .unwrap_or_default();
            aggregate(&vals)
        };
        let v_minus = force(attackers.get(id))?;
        let v_plus = force(supporters.get(id))?;
        let s = combine(q.base_score(id), v_minus, v_plus)?;
        strengths.insert(id.to_string(), s);
    }

    let claim_strength = strengths[q.claim_id()];
    let gradient = if q.is_star() {
        star_gradient(q)
    } else {
        BTreeMap::new()
    };
    Ok(StrengthReport {
        verdict: thresholds.label(claim_strength)?,
        strengths,
        claim_strength,
        gradient,
    })
}

/// ∂σ(claim)/∂τ(a) for every leaf `a` of a depth-1 star. At the kink
/// `v⁺ = v⁻` the support-dominant branch's one-sided derivative is used.
pub fn gradient(q: &Qbaf) -> Result<BTreeMap<String, f64>> {
    if !q.is_star() {
        return Err(Error::UnsupportedStructure(
            "analytic gradients require a depth-1 star centred on the claim".into(),
        ));
    }
    let violations = q.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidQbaf(violations));
    }
    Ok(star_gradient(q))
}

/// `∂F/∂xᵢ = ∏_{k≠i}(1 − x_k)` for each input.
fn aggregate_partials(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // prefix/suffix products avoid dividing by (1 − xᵢ), which may be 0.
    let mut prefix = vec![1.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] * (1.0 - xs[i]);
    }
    let mut suffix = vec![1.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] * (1.0 - xs[i]);
    }
    (0..n).map(|i| prefix[i] * suffix[i + 1]).collect()
}

fn star_gradient(q: &Qbaf) -> BTreeMap<String, f64> {
    let sup_ids: Vec<&str> = q.supports().iter().map(|(f, _)| f.as_str()).collect();
    let att_ids: Vec<&str> = q.attacks().iter().map(|(f, _)| f.as_str()).collect();
    let sup: Vec<f64> = sup_ids.iter().map(|id| q.base_score(id)).collect();
    let att: Vec<f64> = att_ids.iter().map(|id| q.base_score(id)).collect();
    let (_, d_sup, d_att) = star_strength_and_gradient(q.base_score(q.claim_id()), &sup, &att);

    let mut out = BTreeMap::new();
    for (id, d) in sup_ids.iter().zip(d_sup).chain(att_ids.iter().zip(d_att)) {
        *out.entry(id.to_string()).or_insert(0.0) += d;
    }
    out
}

/// Claim strength of a star given leaf scores directly, without building
/// a [`Qbaf`]. Returns `(σ(claim), ∂σ/∂supports, ∂σ/∂attacks)`.
pub fn star_strength_and_gradient(
    claim_tau: f64,
    supports: &[f64],
    attacks: &[f64],
) -> (f64, Vec<f64>, Vec<f64>) {
    let d_plus = aggregate_partials(supports);
    let d_minus = aggregate_partials(attacks);
    let v_plus = supports.iter().fold(0.0, |a, &x| a + x - a * x);
    let v_minus = attacks.iter().fold(0.0, |a, &x| a + x - a * x);
    let sigma = combine_unchecked(claim_tau, v_minus, v_plus);
    let scale = if v_plus >= v_minus {
        1.0 - claim_tau
    } else {
        claim_tau
    };
    (
        sigma,
        d_plus.into_iter().map(|d| scale * d).collect(),
        d_minus.into_iter().map(|d| -scale * d).collect(),
    )
}
