//! The checked-in recorded-response corpus must match the prompts the
//! library renders today. Set `ARGVERDICT_UPDATE_FIXTURES=1` to rewrite it
//! after an intentional prompt change.

mod common;

use std::fs;

use argverdict::llm::{FixtureTransport, LlmClient, LlmEndpointConfig};
use argverdict::Relation;

#[test]
fn corpus_matches_rendered_prompts() {
    let dir = common::corpus_dir();
    let (claims, chat) = common::render_corpus();
    if std::env::var_os("ARGVERDICT_UPDATE_FIXTURES").is_some() {
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("claims.jsonl"), &claims).unwrap();
        fs::write(dir.join("chat.jsonl"), &chat).unwrap();
    }
    assert_eq!(fs::read_to_string(dir.join("claims.jsonl")).unwrap(), claims);
    assert_eq!(fs::read_to_string(dir.join("chat.jsonl")).unwrap(), chat);
}

#[test]
fn every_recorded_response_parses() {
    let t = FixtureTransport::load(&common::corpus_dir()).unwrap();
    let client = LlmClient::new(LlmEndpointConfig::default(), std::sync::Arc::new(t), None).unwrap();
    for c in common::corpus() {
        let d = client.generate_arguments(&c.claim).unwrap();
        let sup: Vec<&str> = c.supports.iter().map(|(t, _)| t.as_str()).collect();
        let att: Vec<&str> = c.attacks.iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(d.supports, sup, "{}", c.id);
        assert_eq!(d.attacks, att, "{}", c.id);
        for (text, p) in &c.supports {
            let s = client.prompt_base_score(&c.claim, text, Relation::Support).unwrap();
            assert_eq!(s, *p as f64 / 100.0);
        }
        for (text, p) in &c.attacks {
            let s = client.prompt_base_score(&c.claim, text, Relation::Attack).unwrap();
            assert_eq!(s, *p as f64 / 100.0);
        }
    }
}
