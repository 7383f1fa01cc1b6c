//! Prompt templates sent to the language models, rendered as plain text.
//!
//! Line structure is fixed: one template line per output line, blank lines
//! where the layout has vertical space, four spaces per indentation level,
//! no trailing newline. Substitution is single-pass, so placeholder-like
//! text inside a claim or argument is never expanded.

pub const ARGUMENT_GENERATION_TEMPLATE: &str = "\
Please provide a set of short arguments supporting and attacking the following claim.
Construct the arguments so they refer to the truthfulness of the claim.
The arguments should be short and concise, ideally one sentence per argument.
The arguments should be based on factual information and logical reasoning.
Only provide supporting or attacking arguments if you think there is a valid and convincing support or attack for this claim, meaning there is a non-zero probability that the claim is true or false; otherwise return: N/A.
Provide as many unique supporting and attacking arguments as you think are correct and applicable to the claim.

Respond in the following format:

claim:
    \"{claim}\".

Output:
{
    'support': [
        \"<SUPPORT ARGUMENT 1>\",
        \"<SUPPORT ARGUMENT 2>\",
        ...
    ],
    'attack': [
        \"<ATTACK ARGUMENT 1>\",
        \"<ATTACK ARGUMENT 2>\",
        ...
    ]
}

Claim: {claim}";

pub const BASE_SCORE_TEMPLATE: &str = "\
You are an analyst evaluating the validity and relevance of arguments.

For the argument:

Argument: \"{statement}\"

Please give your confidence that the argument presents a compelling case {direction} the statement:

Statement: \"{claim}\"

Your assessment should be based on how well the argument {verb} the considered statement, as well as the correctness, accuracy, and truthfulness of the given argument.
Your response should be between 0% and 100%, with 0% indicating that the considered argument is definitely invalid, 100% indicating that the considered argument is definitely valid, and values in between indicating various levels of uncertainty.
Your estimates should be well-calibrated, so feel free to err on the side of caution and output moderate probabilities if you are not completely sure in your assessment.
Please respond in the following form:

[The predicted likelihood that the considered argument is valid as a number between 0 and 100]%

Reply only with the predicted likelihood without any additional text or explanation.";

pub const DIRECT_CLASSIFICATION_TEMPLATE: &str = "\
You are a careful fact-checking assistant.
Classify the claim below using exactly one of the following three choices: True, False, or Uncertain.
Return only your choice as a single word and nothing else.

Claim: {claim}";

/// Replaces `{name}` placeholders in one left-to-right pass. Unknown
/// placeholders (including the literal braces of the output skeleton) are
/// copied through.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len() + 256);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let replaced = after.find('}').and_then(|close| {
            let name = &after[..close];
            vars.iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| (close, *v))
        });
        match replaced {
            Some((close, value)) => {
                out.push_str(value);
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

pub fn argument_generation_prompt(claim: &str) -> String {
    render(ARGUMENT_GENERATION_TEMPLATE, &[("claim", claim)])
}

pub fn base_score_prompt(claim: &str, statement: &str, is_support: bool) -> String {
    let (direction, verb) = if is_support {
        ("in favour of", "supports")
    } else {
        ("against", "refutes")
    };
    render(
        BASE_SCORE_TEMPLATE,
        &[
            ("statement", statement),
            ("claim", claim),
            ("direction", direction),
            ("verb", verb),
        ],
    )
}

pub fn direct_classification_prompt(claim: &str) -> String {
    render(DIRECT_CLASSIFICATION_TEMPLATE, &[("claim", claim)])
}
