//! Classification metrics over gold/predicted label pairs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonl;
use crate::label::Label;

/// One claim with its gold label, as read from a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub claim: String,
    pub label: Label,
}

/// Reads `{"claim", "label"}` lines. Order and duplicates are kept.
pub fn load_claims(path: &Path) -> Result<Vec<ClaimRecord>> {
    jsonl::read_checked(path, |r: &ClaimRecord| {
        if r.claim.trim().is_empty() {
            Err("claim is empty".into())
        } else {
            Ok(())
        }
    })
}

/// A gold label and the label predicted for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub gold: Label,
    pub predicted: Label,
}

/// Counts indexed `[gold][predicted]` in `Label::ALL` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix(pub [[usize; 3]; 3]);

impl ConfusionMatrix {
    pub fn from_outcomes(outcomes: &[Outcome]) -> Self {
        let mut m = [[0; 3]; 3];
        for o in outcomes {
            m[o.gold.index()][o.predicted.index()] += 1;
        }
        ConfusionMatrix(m)
    }

    pub fn total(&self) -> usize {
        self.0.iter().flatten().sum()
    }

    pub fn support(&self, gold: Label) -> usize {
        self.0[gold.index()].iter().sum()
    }

    pub fn recall(&self, gold: Label) -> Option<f64> {
        let n = self.support(gold);
        (n > 0).then(|| self.0[gold.index()][gold.index()] as f64 / n as f64)
    }
}

pub fn accuracy(outcomes: &[Outcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::InvalidInput("no records to score".into()));
    }
    let hits = outcomes.iter().filter(|o| o.gold == o.predicted).count();
    Ok(hits as f64 / outcomes.len() as f64)
}

pub fn per_class_recall(outcomes: &[Outcome]) -> Result<BTreeMap<Label, f64>> {
    let m = ConfusionMatrix::from_outcomes(outcomes);
    Label::ALL
        .iter()
        .map(|&l| {
            m.recall(l).map(|r| (l, r)).ok_or_else(|| {
                Error::InvalidInput(format!("no records with gold label {l}; balanced accuracy is undefined"))
            })
        })
        .collect()
}

/// Unweighted mean of the three per-class recalls.
pub fn balanced_accuracy(outcomes: &[Outcome]) -> Result<f64> {
    let r = per_class_recall(outcomes)?;
    Ok(r.values().sum::<f64>() / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::io::Write;

    fn o(gold: Label, predicted: Label) -> Outcome {
        Outcome { gold, predicted }
    }

    #[test]
    fn recalls_one_half_zero() {
        use Label::*;
        let data = [
            o(True, True),
            o(True, True),
            o(False, False),
            o(False, True),
            o(Uncertain, False),
            o(Uncertain, True),
        ];
        assert_eq!(balanced_accuracy(&data).unwrap(), 0.5);
        assert_eq!(accuracy(&data).unwrap(), 0.5);
    }

    #[test]
    fn missing_class_named() {
        let data = [o(Label::True, Label::True), o(Label::False, Label::False)];
        let msg = balanced_accuracy(&data).unwrap_err().to_string();
        assert!(msg.contains("Uncertain"), "{msg}");
    }

    #[test]
    fn random_predictions_near_one_third() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data: Vec<_> = (0..30_000)
            .map(|i| o(Label::ALL[i % 3], Label::ALL[rng.random_range(0..3)]))
            .collect();
        let b = balanced_accuracy(&data).unwrap();
        assert!((b - 1.0 / 3.0).abs() < 0.01, "{b}");
        assert!((b - accuracy(&data).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn load_claims_contract() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.jsonl");
        let mut f = std::fs::File::create(&p).unwrap();
        writeln!(f, r#"{{"claim":"a","label":"True"}}"#).unwrap();
        writeln!(f, r#"{{"claim":"b","label":"False"}}"#).unwrap();
        writeln!(f, r#"{{"claim":"a","label":"Uncertain"}}"#).unwrap();
        drop(f);
        assert_eq!(load_claims(&p).unwrap().len(), 3);

        std::fs::write(&p, "{\"claim\":\"a\",\"label\":\"True\"}\n{\"claim\":\"b\",\"label\":\"Supported\"}\n").unwrap();
        let msg = load_claims(&p).unwrap_err().to_string();
        assert!(msg.contains(":2:") && msg.contains("map Supported to True"), "{msg}");

        std::fs::write(&p, "").unwrap();
        assert!(load_claims(&p).unwrap().is_empty());
    }
}
