//! Shared helpers for the integration tests: the recorded-response corpus
//! and small process utilities.

#![allow(dead_code)]

pub mod synthetic;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use argverdict::prompts::{argument_generation_prompt, base_score_prompt};
use serde_json::json;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn corpus_dir() -> PathBuf {
    manifest_dir().join("tests/fixtures/corpus30")
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_argverdict"))
}

pub fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("spawn argverdict");
    assert!(
        out.status.success(),
        "command failed ({:?})\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// One recorded claim: gold label, arguments with the percentage the
/// scoring model gives each, and the style of the generation completion.
pub struct CorpusClaim {
    pub id: String,
    pub claim: String,
    pub label: &'static str,
    pub supports: Vec<(String, u32)>,
    pub attacks: Vec<(String, u32)>,
}

const TOPICS: [(&str, &str); 10] = [
    ("The Golden Gate Bridge", "opened to traffic in 1937"),
    ("Mount Kilimanjaro", "is the highest mountain in Africa"),
    ("The Great Wall of China", "is visible to the naked eye from the Moon"),
    ("Honey", "can stay edible for thousands of years when sealed"),
    ("Venus", "rotates in the opposite direction to most planets"),
    ("The Amazon river", "carries more water than any other river"),
    ("Goldfish", "have a memory span of only three seconds"),
    ("The human skeleton", "contains exactly 206 bones at birth"),
    ("Lightning", "never strikes the same place twice"),
    ("The Eiffel Tower", "grows taller in summer because of thermal expansion"),
];

fn pct(i: usize, j: usize, lo: u32, span: u32) -> u32 {
    lo + ((37 * i + 11 * j + 5) % span as usize) as u32
}

/// The 30-claim corpus. Claims cycle through True-leaning, False-leaning
/// and balanced debates; a few use N/A lists, reasoning preambles and
/// unusual quoting so the parsers are exercised too.
pub fn corpus() -> Vec<CorpusClaim> {
    (0..30)
        .map(|i| {
            let (subject, predicate) = TOPICS[i % 10];
            let variant = i / 10;
            let claim = match variant {
                0 => format!("{subject} {predicate}."),
                1 => format!("According to common accounts, {} {predicate}.", subject.to_lowercase()),
                _ => format!("It is widely reported that {} {predicate}.", subject.to_lowercase()),
            };
            let n_sup = 1 + (i * 7) % 3;
            let n_att = (i * 5) % 4;
            let kind = i % 3;
            let (s_lo, a_lo) = match kind {
                0 => (75, 5),
                1 => (5, 75),
                _ => (40, 40),
            };
            let mut supports: Vec<(String, u32)> = (0..n_sup)
                .map(|j| {
                    (
                        format!("Source {} documents that {} {predicate}.", j + 1, subject.to_lowercase()),
                        pct(i, j, s_lo, 20),
                    )
                })
                .collect();
            let mut attacks: Vec<(String, u32)> = (0..n_att)
                .map(|j| {
                    (
                        format!("Source {} disputes whether {} {predicate}.", j + 1, subject.to_lowercase()),
                        pct(i, j + 3, a_lo, 20),
                    )
                })
                .collect();
            if i == 8 || i == 20 {
                supports.clear();
                attacks.clear();
            }
            let label = match (kind, supports.is_empty() && attacks.is_empty()) {
                (_, true) => "Uncertain",
                (0, _) => "True",
                (1, _) if attacks.is_empty() => "Uncertain",
                (1, _) => "False",
                _ => "Uncertain",
            };
            CorpusClaim {
                id: format!("c{i:02}"),
                claim,
                label,
                supports,
                attacks,
            }
        })
        .collect()
}

fn list(items: &[(String, u32)], i: usize) -> String {
    if items.is_empty() {
        return "N/A".into();
    }
    let quote = if i % 4 == 1 { '\'' } else { '"' };
    let body: Vec<String> = items
        .iter()
        .map(|(t, _)| format!("        {quote}{t}{quote}"))
        .collect();
    format!("[\n{}\n    ]", body.join(",\n"))
}

fn generation_completion(c: &CorpusClaim, i: usize) -> String {
    let block = format!(
        "Output:\n{{\n    'support': {},\n    'attack': {}\n}}",
        list(&c.supports, i),
        list(&c.attacks, i)
    );
    if i % 5 == 2 {
        format!("<think>\nWeighing the evidence for the claim.\n</think>\n{block}")
    } else {
        block
    }
}

fn score_completion(p: u32, i: usize, j: usize) -> String {
    match (i + j) % 3 {
        0 => format!("{p}%"),
        1 => format!("Likelihood: {p}%"),
        _ => format!("<think>short check</think>\n{p}%"),
    }
}

/// `(claims.jsonl, chat.jsonl)` contents for the corpus.
pub fn render_corpus() -> (String, String) {
    let mut claims = String::new();
    let mut chat = String::new();
    let mut push = |prompt: String, completion: String| {
        chat.push_str(&json!({"prompt": prompt, "completion": completion}).to_string());
        chat.push('\n');
    };
    for (i, c) in corpus().iter().enumerate() {
        claims.push_str(&json!({"id": c.id, "claim": c.claim, "label": c.label}).to_string());
        claims.push('\n');
        push(argument_generation_prompt(&c.claim), generation_completion(c, i));
        for (j, (text, p)) in c.supports.iter().enumerate() {
            push(base_score_prompt(&c.claim, text, true), score_completion(*p, i, j));
        }
        for (j, (text, p)) in c.attacks.iter().enumerate() {
            push(base_score_prompt(&c.claim, text, false), score_completion(*p, i, j + 1));
        }
    }
    (claims, chat)
}

/// Reads every file under `dir` into `(relative path, bytes)` pairs,
/// sorted by path.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

/// Copies the corpus into `dir` and adds `embeddings.jsonl` with a
/// 4-dimensional embedding for every argument's scoring prompt. Coordinate 0
/// is the recorded percentage over 100.
pub fn corpus_with_embeddings(dir: &Path) {
    std::fs::create_dir_all(dir).unwrap();
    for f in ["claims.jsonl", "chat.jsonl"] {
        std::fs::copy(corpus_dir().join(f), dir.join(f)).unwrap();
    }
    let mut out = String::new();
    for (i, c) in corpus().iter().enumerate() {
        let rows = c
            .supports
            .iter()
            .map(|a| (a, true))
            .chain(c.attacks.iter().map(|a| (a, false)));
        for (j, ((text, p), is_support)) in rows.enumerate() {
            let e = vec![
                *p as f64 / 100.0,
                1.0,
                0.1 * (j % 3) as f64,
                0.1 * (i % 4) as f64,
            ];
            let prompt = base_score_prompt(&c.claim, text, is_support);
            out.push_str(&json!({"input": prompt, "embedding": e}).to_string());
            out.push('\n');
        }
    }
    std::fs::write(dir.join("embeddings.jsonl"), out).unwrap();
}
