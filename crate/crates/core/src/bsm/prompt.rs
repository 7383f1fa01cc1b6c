use serde::Serialize;

use crate::error::{Error, Result};
use crate::prompts::base_score_prompt;
use crate::qbaf::Relation;

/// The base-score prompt for one (claim, argument, relation) triple. This is
/// the text that gets embedded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ScorePrompt(String);

impl ScorePrompt {
    pub fn text(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

pub fn build_score_prompt(claim: &str, argument: &str, relation: Relation) -> Result<ScorePrompt> {
    if claim.trim().is_empty() {
        return Err(Error::InvalidInput("claim text is empty".into()));
    }
    if argument.trim().is_empty() {
        return Err(Error::InvalidInput("argument text is empty".into()));
    }
    Ok(ScorePrompt(base_score_prompt(
        claim,
        argument,
        relation.is_support(),
    )))
}
