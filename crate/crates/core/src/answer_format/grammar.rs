//! Literal grammar shared by every task: integers, bracketed lists,
//! parenthesized tuples and the bare word `Impossible`.

use crate::answer::{CandidateAnswer, ScheduleEntry};
use crate::error::{EngineError, Result};
use crate::task::{Grammar, TaskKind};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Int(u64, usize),
    List(Vec<Node>, usize),
    Tuple(Vec<Node>, usize),
    Word(String, usize),
}

impl Node {
    fn pos(&self) -> usize {
        match self {
            Node::Int(_, p) | Node::List(_, p) | Node::Tuple(_, p) | Node::Word(_, p) => *p,
        }
    }
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(EngineError::Grammar {
        position,
        message: message.into(),
    })
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn value(&mut self) -> Result<Node> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => err(start, "unexpected end of input"),
            Some(b'[') => self.sequence(b']').map(|items| Node::List(items, start)),
            Some(b'(') => self.sequence(b')').map(|items| Node::Tuple(items, start)),
            Some(c) if c.is_ascii_digit() => {
                let mut value: u64 = 0;
                while let Some(&c) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(u64::from(c - b'0')))
                        .ok_or_else(|| EngineError::Grammar {
                            position: start,
                            message: "integer overflow".into(),
                        })?;
                    self.pos += 1;
                }
                Ok(Node::Int(value, start))
            }
            Some(q @ (b'"' | b'\'')) => {
                self.pos += 1;
                let word_start = self.pos;
                while self.src.get(self.pos).is_some_and(|&c| c != q) {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() {
                    return err(start, "unterminated quoted word");
                }
                let word = String::from_utf8_lossy(&self.src[word_start..self.pos]).into_owned();
                self.pos += 1;
                Ok(Node::Word(word, start))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let word = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                Ok(Node::Word(word, start))
            }
            Some(c) => err(start, format!("unexpected character `{}`", c as char)),
        }
    }

    fn sequence(&mut self, close: u8) -> Result<Vec<Node>> {
        self.pos += 1;
        let mut items = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.value()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                None => return err(self.pos, format!("expected `{}` before end of input", close as char)),
                Some(c) => return err(self.pos, format!("expected `,` or `{}`, found `{}`", close as char, c as char)),
            }
        }
    }
}

fn parse_tree(literal: &str) -> Result<Node> {
    let mut lx = Lexer {
        src: literal.as_bytes(),
        pos: 0,
    };
    let node = lx.value()?;
    if let Some(c) = lx.peek() {
        return err(lx.pos, format!("trailing content starting with `{}`", c as char));
    }
    Ok(node)
}

fn as_usize(node: &Node) -> Result<usize> {
    match node {
        Node::Int(v, p) => usize::try_from(*v).or_else(|_| err(*p, "integer too large")),
        other => err(other.pos(), "expected an integer"),
    }
}

fn int_list(node: &Node) -> Result<Vec<usize>> {
    match node {
        Node::List(items, _) => items.iter().map(as_usize).collect(),
        other => err(other.pos(), "expected a bracketed list of integers"),
    }
}

fn schedule_entry(node: &Node) -> Result<ScheduleEntry> {
    let (Node::Tuple(items, p) | Node::List(items, p)) = node else {
        return err(node.pos(), "expected a (meeting_id, room_id, start_time) tuple");
    };
    if items.len() != 3 {
        return err(*p, format!("expected 3 fields, found {}", items.len()));
    }
    let start = as_usize(&items[2])?;
    Ok(ScheduleEntry {
        meeting: as_usize(&items[0])?,
        room: as_usize(&items[1])?,
        start: u32::try_from(start).or_else(|_| err(items[2].pos(), "start time too large"))?,
    })
}

/// Parses an answer literal under `task`'s grammar.
pub fn parse_answer_literal(task: TaskKind, literal: &str) -> Result<CandidateAnswer> {
    let tree = parse_tree(literal)?;
    match task.grammar() {
        Grammar::IndexList if task == TaskKind::SetCover => match &tree {
            Node::Word(w, _) if w.eq_ignore_ascii_case("impossible") => Ok(CandidateAnswer::Impossible),
            other => int_list(other).map(CandidateAnswer::IndexList),
        },
        Grammar::VertexList => int_list(&tree).map(CandidateAnswer::VertexList),
        Grammar::IndexList => int_list(&tree).map(CandidateAnswer::IndexList),
        Grammar::ColorAssignment => int_list(&tree).map(CandidateAnswer::ColorAssignment),
        Grammar::Route => int_list(&tree).map(CandidateAnswer::Route),
        Grammar::PartitionPair => match &tree {
            Node::List(parts, _) if parts.len() == 2 => {
                Ok(CandidateAnswer::PartitionPair(int_list(&parts[0])?, int_list(&parts[1])?))
            }
            other => err(other.pos(), "expected [[part one], [part two]]"),
        },
        Grammar::Schedule => match &tree {
            Node::List(entries, _) => entries
                .iter()
                .map(schedule_entry)
                .collect::<Result<_>>()
                .map(CandidateAnswer::Schedule),
            other => err(other.pos(), "expected a list of (meeting_id, room_id, start_time) tuples"),
        },
    }
}
