//! Ternary claim verification over claim-centred quantitative bipolar
//! argumentation frameworks.
//!
//! A claim is debated by generated supporting and attacking arguments, the
//! arguments receive base scores, DF-QuAD computes the claim strength, and a
//! fixed threshold map turns that strength into `True`, `False` or
//! `Uncertain`. The verdict is always recomputable from the stored framework
//! and scores.

pub mod error;
pub mod label;
pub mod qbaf;
pub mod jsonl;
pub mod prompts;
pub mod scorer;
pub mod semantics;
pub mod bsm;
pub mod llm;
pub mod reward;
pub mod eval;
pub mod cli;

pub use error::{Error, Result};
pub use label::{threshold, Label, Thresholds, Verdict};
pub use qbaf::{build_ita_qbaf, Argument, Qbaf, Relation, Role};
pub use semantics::{aggregate, combine, evaluate, gradient, StrengthReport};
