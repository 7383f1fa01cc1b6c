//! Parsers for model completions. Each one accepts arbitrary text and
//! returns a value or a [`Error::Parse`] carrying the raw completion.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

/// Supporting and attacking arguments generated for one claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedDebate {
    pub supports: Vec<String>,
    pub attacks: Vec<String>,
    /// The completion the lists were parsed from.
    pub raw: String,
}

static PERCENT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(\d+(?:\.\d+)?)\s*%").expect("valid regex"));
static LABEL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(true|false|uncertain)\b").expect("valid regex"));
static KEY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"(?i)['"“”‘’]?\b(support|attack)s?\b['"“”‘’]?\s*:"#).expect("valid regex")
});

fn parse_error(message: impl Into<String>, raw: &str) -> Error {
    Error::Parse {
        message: message.into(),
        raw: raw.to_string(),
    }
}

/// Text after the last closing reasoning tag, or all of it.
fn after_reasoning(raw: &str) -> &str {
    match raw.rfind("</think>") {
        Some(i) => &raw[i + "</think>".len()..],
        None => raw,
    }
}

/// First number directly followed by `%`, divided by 100 and clamped to
/// `[0, 1]`.
pub fn parse_percentage(raw: &str) -> Result<f64> {
    let text = after_reasoning(raw);
    let caps = PERCENT
        .captures(text)
        .ok_or_else(|| parse_error("no percentage found", raw))?;
    let value: f64 = caps[1]
        .parse()
        .map_err(|_| parse_error("unreadable percentage", raw))?;
    if !value.is_finite() {
        return Err(parse_error("percentage is not finite", raw));
    }
    Ok((value / 100.0).clamp(0.0, 1.0))
}

/// First whole-word label after any reasoning trace.
pub fn parse_label(raw: &str) -> Option<Label> {
    LABEL
        .find(after_reasoning(raw))
        .map(|m| match m.as_str().to_ascii_lowercase().as_str() {
            "true" => Label::True,
            "false" => Label::False,
            _ => Label::Uncertain,
        })
}

/// Like [`parse_label`] but falls back to `Uncertain`.
pub fn classify_completion(raw: &str) -> Label {
    parse_label(raw).unwrap_or(Label::Uncertain)
}

fn closes(open: char, c: char) -> bool {
    match open {
        '\'' => c == '\'',
        '"' => c == '"',
        '“' => c == '”' || c == '"',
        '‘' => c == '’' || c == '\'',
        _ => false,
    }
}

fn is_open_quote(c: char) -> bool {
    matches!(c, '\'' | '"' | '“' | '‘')
}

fn is_na(item: &str) -> bool {
    let t = item.trim().trim_end_matches('.');
    t.eq_ignore_ascii_case("n/a") || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("none")
}

/// Reads a list starting just after `[`. Returns the items and the rest of
/// the input after the closing `]`.
fn read_list(s: &str) -> Option<(Vec<String>, &str)> {
    let mut items = Vec::new();
    let mut rest = s;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        let mut chars = rest.chars();
        let c = chars.next()?;
        if c == ']' {
            return Some((items, chars.as_str()));
        }
        if is_open_quote(c) {
            let body = chars.as_str();
            // a closing quote only counts when the list continues after it
            let end = body.char_indices().find(|&(i, q)| {
                closes(c, q)
                    && body[i + q.len_utf8()..]
                        .trim_start()
                        .starts_with([',', ']'])
            });
            let (i, q) = end?;
            items.push(body[..i].to_string());
            rest = &body[i + q.len_utf8()..];
        } else {
            let end = rest.find([',', ']'])?;
            items.push(rest[..end].to_string());
            rest = &rest[end..];
        }
    }
}

/// What follows `key:` in the output block.
fn read_value(s: &str) -> Option<Vec<String>> {
    let s = s.trim_start();
    if let Some(list) = s.strip_prefix('[') {
        return read_list(list).map(|(items, _)| items);
    }
    let head: String = s
        .chars()
        .skip_while(|c| is_open_quote(*c))
        .take(4)
        .collect();
    if head.len() >= 3 && is_na(&head[..3]) {
        return Some(Vec::new());
    }
    None
}

/// Extracts the `support` and `attack` lists from an argument-generation
/// completion. A list given as `N/A`, or absent while the other is present,
/// is empty. `N/A` and blank entries inside a list are dropped.
pub fn parse_arguments(raw: &str) -> Result<GeneratedDebate> {
    let text = after_reasoning(raw);
    let block = match text.rfind("Output:") {
        Some(i) => &text[i + "Output:".len()..],
        None => match text.find('{') {
            Some(i) => &text[i..],
            None => return Err(parse_error("no Output block found", raw)),
        },
    };

    let mut supports = None;
    let mut attacks = None;
    for caps in KEY.captures_iter(block) {
        let key = caps[1].to_ascii_lowercase();
        let slot = if key == "support" { &mut supports } else { &mut attacks };
        if slot.is_some() {
            continue;
        }
        let after = &block[caps.get(0).expect("whole match").end()..];
        let items = read_value(after)
            .ok_or_else(|| parse_error(format!("malformed '{key}' list"), raw))?;
        *slot = Some(clean(items));
    }
    if supports.is_none() && attacks.is_none() {
        return Err(parse_error("no 'support' or 'attack' list found", raw));
    }
    Ok(GeneratedDebate {
        supports: supports.unwrap_or_default(),
        attacks: attacks.unwrap_or_default(),
        raw: raw.to_string(),
    })
}

fn clean(items: Vec<String>) -> Vec<String> {
    items
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty() && !is_na(s))
        .collect()
}
