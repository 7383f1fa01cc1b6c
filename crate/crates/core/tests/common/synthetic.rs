//! Synthetic debates over an oracle embedding whose first coordinate is the
//! argument's true quality plus seeded noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use sha2::{Digest, Sha256};

use argverdict::bsm::{Debate, Embedder, Embedding, ParaphraseGroup, PrimingExample, RankedSet};
use argverdict::{Label, Relation, Result};

pub const DIM: usize = 16;
pub const QUALITY_NOISE: f64 = 0.05;

fn text_seed(text: &str) -> u64 {
    let d = Sha256::digest(text.as_bytes());
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

/// Reads `q=<quality>` from the argument line of a scoring prompt.
/// Coordinate 0 is that quality plus N(0, 0.05²); the other coordinates are
/// N(0, 1) distractors. Everything is seeded by the argument text, so a
/// paraphrase gets fresh noise and distractors.
pub struct OracleEmbedder;

fn argument_text(prompt: &str) -> &str {
    let start = prompt.find("Argument: \"").expect("argument line") + "Argument: \"".len();
    let end = prompt[start..].find('"').expect("closing quote") + start;
    &prompt[start..end]
}

fn quality(argument: &str) -> f64 {
    let at = argument.find("q=").expect("quality marker") + 2;
    argument[at..]
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

impl Embedder for OracleEmbedder {
    fn embed(&self, text: &str) -> Result<Embedding> {
        let arg = argument_text(text);
        let mut rng = ChaCha8Rng::seed_from_u64(text_seed(arg));
        let noise = Normal::new(0.0, QUALITY_NOISE).unwrap();
        let unit = Normal::new(0.0, 1.0).unwrap();
        let mut x = vec![quality(arg) + noise.sample(&mut rng)];
        x.extend((1..DIM).map(|_| unit.sample(&mut rng)));
        Embedding::new(x)
    }
}

fn arg_text(tag: &str, q: f64) -> String {
    format!("{tag} q={q:.4} .")
}

/// A labelled debate. True debates pair strong supports with weak attacks,
/// False the reverse, Uncertain debates pair each support with an attack
/// of equal quality.
pub fn debate(rng: &mut ChaCha8Rng, id: &str) -> Debate {
    let label = Label::ALL[rng.random_range(0..3)];
    let n_sup = rng.random_range(1..=3);
    let n_att = rng.random_range(1..=3);
    let strong = |rng: &mut ChaCha8Rng| rng.random_range(0.65..1.0);
    let weak = |rng: &mut ChaCha8Rng| rng.random_range(0.0..0.35);
    let (sq, aq): (Vec<f64>, Vec<f64>) = match label {
        Label::True => (
            (0..n_sup).map(|_| strong(rng)).collect(),
            (0..n_att).map(|_| weak(rng)).collect(),
        ),
        Label::False => (
            (0..n_sup).map(|_| weak(rng)).collect(),
            (0..n_att).map(|_| strong(rng)).collect(),
        ),
        Label::Uncertain => {
            let qs: Vec<f64> = (0..n_sup).map(|_| rng.random_range(0.2..0.9)).collect();
            (qs.clone(), qs)
        }
    };
    Debate {
        claim: format!("synthetic claim {id}"),
        label,
        supports: sq
            .iter()
            .enumerate()
            .map(|(j, &q)| arg_text(&format!("{id} support {j}"), q))
            .collect(),
        attacks: aq
            .iter()
            .enumerate()
            .map(|(j, &q)| arg_text(&format!("{id} attack {j}"), q))
            .collect(),
    }
}

pub fn debates(seed: u64, prefix: &str, n: usize) -> Vec<Debate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| debate(&mut rng, &format!("{prefix}{i}"))).collect()
}

/// Priming targets as a hedging model would give them: quality squeezed
/// into `[0.3, 0.7]`.
pub fn priming(seed: u64, n: usize) -> Vec<PrimingExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let q: f64 = rng.random_range(0.0..1.0);
            let relation = if i % 2 == 0 { Relation::Support } else { Relation::Attack };
            PrimingExample {
                claim: format!("priming claim {i}"),
                argument: arg_text(&format!("prime {i}"), q),
                relation,
                target: 0.3 + 0.4 * q,
            }
        })
        .collect()
}

/// Paraphrase groups: several rewordings of one argument, same quality.
pub fn paraphrase_groups(seed: u64, prefix: &str, n: usize) -> Vec<ParaphraseGroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let q: f64 = rng.random_range(0.05..0.95);
            let k = rng.random_range(3..=5);
            ParaphraseGroup {
                claim: format!("paraphrase claim {prefix}{i}"),
                relation: if i % 2 == 0 { Relation::Support } else { Relation::Attack },
                members: (0..k)
                    .map(|m| arg_text(&format!("{prefix}{i} wording {m}"), q))
                    .collect(),
            }
        })
        .collect()
}

/// Ranked sets of four arguments, strongest first, qualities 0.2 apart.
pub fn ranked_sets(seed: u64, prefix: &str, n: usize) -> Vec<RankedSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let top: f64 = rng.random_range(0.7..1.0);
            RankedSet {
                claim: format!("ranked claim {prefix}{i}"),
                relation: if i % 2 == 0 { Relation::Support } else { Relation::Attack },
                members: (0..4)
                    .map(|m| arg_text(&format!("{prefix}{i} member {m}"), top - 0.2 * m as f64))
                    .collect(),
            }
        })
        .collect()
}
