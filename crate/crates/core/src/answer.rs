//! Task-typed answers and verification outcomes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::task::Grammar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub meeting: usize,
    pub room: usize,
    /// Clock time in HHMM form, e.g. 930 for 09:30.
    pub start: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateAnswer {
    VertexList(Vec<usize>),
    IndexList(Vec<usize>),
    ColorAssignment(Vec<usize>),
    PartitionPair(Vec<usize>, Vec<usize>),
    Schedule(Vec<ScheduleEntry>),
    Route(Vec<usize>),
    /// Set cover's "no cover exists" answer.
    Impossible,
}

impl CandidateAnswer {
    pub fn grammar(&self) -> Grammar {
        match self {
            CandidateAnswer::VertexList(_) => Grammar::VertexList,
            CandidateAnswer::IndexList(_) | CandidateAnswer::Impossible => Grammar::IndexList,
            CandidateAnswer::ColorAssignment(_) => Grammar::ColorAssignment,
            CandidateAnswer::PartitionPair(..) => Grammar::PartitionPair,
            CandidateAnswer::Schedule(_) => Grammar::Schedule,
            CandidateAnswer::Route(_) => Grammar::Route,
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

/// Renders the answer literal exactly as a model is asked to write it.
impl fmt::Display for CandidateAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateAnswer::VertexList(v)
            | CandidateAnswer::IndexList(v)
            | CandidateAnswer::ColorAssignment(v)
            | CandidateAnswer::Route(v) => write_list(f, v),
            CandidateAnswer::PartitionPair(a, b) => {
                f.write_str("[")?;
                write_list(f, a)?;
                f.write_str(", ")?;
                write_list(f, b)?;
                f.write_str("]")
            }
            CandidateAnswer::Schedule(entries) => {
                f.write_str("[")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({}, {}, {})", e.meeting, e.room, e.start)?;
                }
                f.write_str("]")
            }
            CandidateAnswer::Impossible => f.write_str("Impossible"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub feasible: bool,
    pub objective: Option<u64>,
    pub violations: Vec<Violation>,
}

impl VerifyOutcome {
    pub fn feasible(objective: u64) -> Self {
        VerifyOutcome {
            feasible: true,
            objective: Some(objective),
            violations: Vec::new(),
        }
    }
}

/// Collects violations while a verifier walks an answer.
#[derive(Debug, Default)]
pub(crate) struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, code: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            code: code.to_string(),
            detail: detail.into(),
        });
    }

    /// Checks ids are in `0..n` and pairwise distinct. Returns false if
    /// any check failed.
    pub fn ids(&mut self, ids: &[usize], n: usize, what: &str) -> bool {
        let before = self.violations.len();
        let mut seen = vec![false; n];
        for &id in ids {
            if id >= n {
                self.fail("out-of-range", format!("{what} {id} does not exist (valid: 0..{n})"));
            } else if seen[id] {
                self.fail("duplicate", format!("{what} {id} listed more than once"));
            } else {
                seen[id] = true;
            }
        }
        self.violations.len() == before
    }

    pub fn finish(self, objective: impl FnOnce() -> u64) -> VerifyOutcome {
        if self.violations.is_empty() {
            VerifyOutcome::feasible(objective())
        } else {
            VerifyOutcome {
                feasible: false,
                objective: None,
                violations: self.violations,
            }
        }
    }
}

pub(crate) fn wrong_kind(expected: Grammar, got: &CandidateAnswer) -> VerifyOutcome {
    let mut c = Checker::new();
    c.fail(
        "wrong-answer-kind",
        format!("expected {}, got {}", expected.id(), got.grammar().id()),
    );
    c.finish(|| 0)
}
