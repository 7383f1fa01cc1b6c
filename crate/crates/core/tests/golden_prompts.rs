//! Byte-exact snapshots of the rendered prompts. Set
//! `ARGVERDICT_UPDATE_GOLDEN=1` to rewrite them after an intentional change.

mod common;

use std::fs;

use argverdict::bsm::build_score_prompt;
use argverdict::prompts::{argument_generation_prompt, direct_classification_prompt};
use argverdict::Relation;

const CLAIM: &str = "The Eiffel Tower was completed in 1889.";
const ARGUMENT: &str = "It was built as the entrance arch for the 1889 World's Fair.";

fn check(name: &str, rendered: &str) {
    let path = common::manifest_dir().join("tests/golden").join(name);
    if std::env::var_os("ARGVERDICT_UPDATE_GOLDEN").is_some() {
        fs::write(&path, rendered).unwrap();
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(rendered, expected, "{name} drifted");
}

#[test]
fn argument_generation() {
    check("argument_generation.txt", &argument_generation_prompt(CLAIM));
}

#[test]
fn base_score_support() {
    let p = build_score_prompt(CLAIM, ARGUMENT, Relation::Support).unwrap();
    check("base_score_support.txt", p.text());
}

#[test]
fn base_score_attack() {
    let p = build_score_prompt(CLAIM, ARGUMENT, Relation::Attack).unwrap();
    check("base_score_attack.txt", p.text());
}

#[test]
fn direct_classification() {
    check("direct_classification.txt", &direct_classification_prompt(CLAIM));
}
