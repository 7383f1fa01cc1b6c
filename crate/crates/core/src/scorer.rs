//! Base-score sources for generated arguments.

use crate::error::{check_unit, Result};
use crate::qbaf::Relation;

pub trait BaseScorer: Send + Sync {
    /// Base score in `[0, 1]` for `argument` in the given relation to `claim`.
    fn score(&self, claim: &str, argument: &str, relation: Relation) -> Result<f64>;

    fn name(&self) -> &str;
}

/// Assigns the same score to every argument.
#[derive(Debug, Clone, Copy)]
pub struct ConstantScorer(f64);

impl ConstantScorer {
    pub fn new(value: f64) -> Result<Self> {
        Ok(ConstantScorer(check_unit("constant score", value)?))
    }
}

impl Default for ConstantScorer {
    fn default() -> Self {
        ConstantScorer(0.5)
    }
}

impl BaseScorer for ConstantScorer {
    fn score(&self, _claim: &str, _argument: &str, _relation: Relation) -> Result<f64> {
        Ok(self.0)
    }

    fn name(&self) -> &str {
        "constant"
    }
}
