//! The argumentation reward for reinforcement learning on claim strengths,
//! group-relative advantages and the direct-classification reward.

pub mod service;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::label::{Label, UPPER_THRESHOLD};

/// Largest admissible plateau width.
pub const MAX_DELTA: f64 = 1.0 / 3.0;
pub const DEFAULT_EPS: f64 = 1e-8;
const BELOW_MAX: f64 = 99.999_999_999_999_99;

/// Plateau width `Δ` of the reward: strengths within `Δ` of the gold
/// label's target region earn the maximum reward of 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct RewardSpec {
    delta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    delta: f64,
}

impl TryFrom<RawSpec> for RewardSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        RewardSpec::new(r.delta)
    }
}

impl Default for RewardSpec {
    fn default() -> Self {
        RewardSpec { delta: MAX_DELTA }
    }
}

impl RewardSpec {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && (0.0..=MAX_DELTA).contains(&delta) {
            Ok(RewardSpec { delta })
        } else {
            Err(Error::range("delta", delta))
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `1 − Δ`, taken as the upper threshold when `Δ` is the maximal width
    /// so the plateau edge coincides bitwise with the threshold map.
    fn complement(&self) -> f64 {
        if self.delta == MAX_DELTA {
            UPPER_THRESHOLD
        } else {
            1.0 - self.delta
        }
    }
}

/// Piecewise-linear reward for a claim strength `v` given the gold label.
///
/// * True: 100 for `v ≥ 1 − Δ`, otherwise `200v/(1 − Δ) − 100`.
/// * False: 100 for `v ≤ Δ`, otherwise `200(1 − v)/(1 − Δ) − 100`.
/// * Uncertain: 100 for `|v − ½| ≤ Δ/2`, otherwise falling linearly to
///   −100 at `v = 0` and `v = 1`.
pub fn reward(gold: Label, strength: f64, spec: RewardSpec) -> Result<f64> {
    let v = check_unit("strength", strength)?;
    let d = spec.delta;
    let c = spec.complement();
    // distance past the plateau edge, over the length of the linear ramp
    let past = match gold {
        Label::True if v >= c => return Ok(100.0),
        Label::True => (c - v) / c,
        Label::False if v <= d => return Ok(100.0),
        Label::False => (c - (1.0 - v)) / c,
        Label::Uncertain => {
            let dist = (v - 0.5).abs();
            let half = d / 2.0;
            if dist <= half {
                return Ok(100.0);
            }
            (dist - half) / (0.5 - half)
        }
    };
    // off the plateau the reward stays strictly below the maximum even
    // when the step past the edge is lost to rounding
    Ok((100.0 - 200.0 * past).min(BELOW_MAX))
}

/// Trapezoidal quadrature of the reward over `[0, 1]` with `n` intervals.
pub fn integral_check_with(gold: Label, spec: RewardSpec, n: usize) -> f64 {
    let n = n.max(1);
    let h = 1.0 / n as f64;
    let f = |i: usize| reward(gold, (i as f64 * h).min(1.0), spec).expect("grid inside [0, 1]");
    let inner: f64 = (1..n).map(f).sum();
    h * (inner + 0.5 * (f(0) + f(n)))
}

/// [`integral_check_with`] on 10⁵ intervals. Should equal `100 Δ`.
pub fn integral_check(gold: Label, spec: RewardSpec) -> f64 {
    integral_check_with(gold, spec, 100_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdvantageMode {
    /// `(rᵢ − mean)/(std + ε)` with the population standard deviation.
    #[default]
    Normalized,
    /// `rᵢ − mean`.
    MeanOnly,
}

/// Standardised group-relative advantages with `ε = 10⁻⁸`.
pub fn group_advantages(rewards: &[f64]) -> Result<Vec<f64>> {
    group_advantages_with(rewards, AdvantageMode::Normalized, DEFAULT_EPS)
}

pub fn group_advantages_with(rewards: &[f64], mode: AdvantageMode, eps: f64) -> Result<Vec<f64>> {
    if rewards.is_empty() {
        return Err(Error::InvalidInput("reward group is empty".into()));
    }
    if let Some(r) = rewards.iter().find(|r| !r.is_finite()) {
        return Err(Error::InvalidInput(format!("reward {r} is not finite")));
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let centred: Vec<f64> = rewards.iter().map(|r| r - mean).collect();
    // second centring pass removes the rounding left in `mean`
    let drift = centred.iter().sum::<f64>() / n;
    let centred: Vec<f64> = centred.into_iter().map(|c| c - drift).collect();
    Ok(match mode {
        AdvantageMode::MeanOnly => centred,
        AdvantageMode::Normalized => {
            let std = (centred.iter().map(|c| c * c).sum::<f64>() / n).sqrt();
            centred.into_iter().map(|c| c / (std + eps)).collect()
        }
    })
}

/// +100 for a correct label, −100 for a wrong or unparseable one.
pub fn direct_reward(gold: Label, predicted: Option<Label>) -> f64 {
    if predicted == Some(gold) {
        100.0
    } else {
        -100.0
    }
}
