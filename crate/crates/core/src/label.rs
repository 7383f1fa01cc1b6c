//! Ternary verdict labels and the fixed threshold map from claim strength
//! to verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

/// Lower verdict threshold: strengths at or below it are `False`.
pub const LOWER_THRESHOLD: f64 = 1.0 / 3.0;
/// Upper verdict threshold: strengths at or above it are `True`.
pub const UPPER_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    True,
    False,
    Uncertain,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::True, Label::False, Label::Uncertain];

    /// Numeric target used by the semantic loss: True → 1, False → 0,
    /// Uncertain → 0.5.
    pub fn target_strength(self) -> f64 {
        match self {
            Label::True => 1.0,
            Label::False => 0.0,
            Label::Uncertain => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::True => "True",
            Label::False => "False",
            Label::Uncertain => "Uncertain",
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Label::True => 0,
            Label::False => 1,
            Label::Uncertain => 2,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "True" => Ok(Label::True),
            "False" => Ok(Label::False),
            "Uncertain" => Ok(Label::Uncertain),
            other => Err(Error::InvalidInput(unknown_label_message(other))),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| serde::de::Error::custom(unknown_label_message(&s)))
    }
}

/// Error text for labels outside {True, False, Uncertain}. Dataset labels
/// must be mapped before ingestion.
pub(crate) fn unknown_label_message(label: &str) -> String {
    let hint = match label.trim().to_ascii_lowercase().as_str() {
        "supported" => " (map Supported to True)",
        "refuted" => " (map Refuted to False)",
        "conflicting evidence/cherry-picking" | "conflicting evidence" | "cherry-picking" => {
            " (map Conflicting Evidence/Cherry-picking to Uncertain)"
        }
        "not enough evidence" | "notenoughinfo" => {
            " (Not Enough Evidence claims are not part of the ternary task; drop them)"
        }
        _ => "",
    };
    format!("unknown label {label:?}: expected one of True, False, Uncertain{hint}")
}

/// Verdict thresholds. The default pair (1/3, 2/3) is the fixed contract;
/// other values are only reachable through an explicit override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub lower: f64,
    pub upper: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            lower: LOWER_THRESHOLD,
            upper: UPPER_THRESHOLD,
        }
    }
}

impl Thresholds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        check_unit("lower threshold", lower)?;
        check_unit("upper threshold", upper)?;
        if lower >= upper {
            return Err(Error::InvalidInput(format!(
                "lower threshold {lower} must be below upper threshold {upper}"
            )));
        }
        Ok(Thresholds { lower, upper })
    }

    pub fn is_default(&self) -> bool {
        *self == Thresholds::default()
    }

    pub fn label(&self, strength: f64) -> Result<Label> {
        check_unit("strength", strength)?;
        Ok(if strength <= self.lower {
            Label::False
        } else if strength >= self.upper {
            Label::True
        } else {
            Label::Uncertain
        })
    }
}

/// The threshold map h: `False` iff strength ≤ 1/3, `True` iff strength ≥ 2/3,
/// `Uncertain` otherwise.
pub fn threshold(strength: f64) -> Result<Label> {
    Thresholds::default().label(strength)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: Label,
    pub strength: f64,
}

impl Verdict {
    pub fn from_strength(strength: f64) -> Result<Self> {
        Ok(Verdict {
            label: threshold(strength)?,
            strength,
        })
    }
}
