//! Prompt rendering and answer extraction.

mod grammar;
mod prompt;

use serde::{Deserialize, Serialize};

use crate::answer::CandidateAnswer;
use crate::task::TaskKind;

pub use grammar::parse_answer_literal;
pub use prompt::{format_example, render_prompt, INSTRUCTION};

const MARKER: &str = "answer:";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseResult {
    pub format_ok: bool,
    pub answer: Option<CandidateAnswer>,
    pub parse_error: Option<String>,
}

impl ParseResult {
    fn failed(reason: impl Into<String>) -> Self {
        ParseResult {
            format_ok: false,
            answer: None,
            parse_error: Some(reason.into()),
        }
    }
}

/// Strips the decoration models commonly wrap around an answer: markdown
/// emphasis or code ticks and a closing sentence mark.
fn trim_literal(mut s: &str) -> &str {
    loop {
        let before = s;
        s = s.trim();
        s = s.trim_end_matches(['.', ';', '!']);
        if s.len() >= 2 {
            for wrap in ["**", "*", "`"] {
                if let Some(inner) = s.strip_prefix(wrap).and_then(|t| t.strip_suffix(wrap)) {
                    s = inner;
                    break;
                }
            }
        }
        if s == before {
            return s;
        }
    }
}

/// Finds the last case-insensitive `Answer:` marker and parses what follows
/// under the task grammar. Never fails; problems land in `parse_error`.
pub fn extract_answer(task: TaskKind, response_text: &str) -> ParseResult {
    let lower = response_text.to_ascii_lowercase();
    let Some(at) = lower.rfind(MARKER) else {
        return ParseResult::failed("no `Answer:` marker found");
    };
    let tail = trim_literal(&response_text[at + MARKER.len()..]);
    if tail.is_empty() {
        return ParseResult::failed("nothing follows the final `Answer:` marker");
    }
    match parse_answer_literal(task, tail) {
        Ok(answer) => ParseResult {
            format_ok: true,
            answer: Some(answer),
            parse_error: None,
        },
        Err(e) => ParseResult::failed(e.to_string()),
    }
}
