//! Line-oriented scoring service: one JSON request per line in, one JSON
//! reply per line out, correlated by a caller-chosen id.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::net::{TcpListener, ToSocketAddrs};
use std::panic::{self, AssertUnwindSafe};
use std::sync::mpsc;
use std::sync::{Arc, Mutex};
use std::thread;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::answer::Violation;
use crate::instance::Instance;
use crate::reward::{score_response, RewardBreakdown};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRequest {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_id: Option<String>,
    /// An inline instance record, as written by `serialize_instance`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Value>,
    pub response_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    ParseError,
    UnknownInstance,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplyError {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub total: f64,
    pub format_reward: f64,
    pub feasibility_reward: f64,
    pub ratio: Option<f64>,
    pub raw_ratio: Option<f64>,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl From<RewardBreakdown> for Scores {
    fn from(r: RewardBreakdown) -> Self {
        Scores {
            total: r.total,
            format_reward: r.format_reward,
            feasibility_reward: r.feasibility_reward,
            ratio: r.ratio,
            raw_ratio: r.raw_ratio,
            feasible: r.feasible,
            violations: r.violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Scored(Scores),
    Failed { error: ReplyError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReply {
    pub id: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl ScoreReply {
    fn error(id: String, code: ErrorCode, message: impl Into<String>) -> Self {
        ScoreReply {
            id,
            outcome: Outcome::Failed {
                error: ReplyError {
                    code,
                    message: message.into(),
                },
            },
        }
    }

    pub fn scores(&self) -> Option<&Scores> {
        match &self.outcome {
            Outcome::Scored(s) => Some(s),
            Outcome::Failed { .. } => None,
        }
    }
}

/// Scores requests against an optional preloaded suite.
#[derive(Debug, Default)]
pub struct Scorer {
    suite: HashMap<String, Instance>,
}

impl Scorer {
    pub fn new(suite: impl IntoIterator<Item = Instance>) -> Self {
        Scorer {
            suite: suite.into_iter().map(|i| (i.instance_id.clone(), i)).collect(),
        }
    }

    pub fn suite_len(&self) -> usize {
        self.suite.len()
    }

    pub fn score(&self, request: &ScoreRequest) -> ScoreReply {
        let id = request.id.clone();
        let inline;
        let instance = match (&request.instance_id, &request.instance) {
            (Some(iid), None) => match self.suite.get(iid) {
                Some(inst) => inst,
                None => return ScoreReply::error(id, ErrorCode::UnknownInstance, format!("unknown instance `{iid}`")),
            },
            (None, Some(value)) => match Instance::from_value(value.clone()) {
                Ok(inst) => {
                    inline = inst;
                    &inline
                }
                Err(e) => return ScoreReply::error(id, ErrorCode::ParseError, format!("invalid instance: {e}")),
            },
            _ => {
                return ScoreReply::error(
                    id,
                    ErrorCode::ParseError,
                    "exactly one of `instance_id` and `instance` is required",
                )
            }
        };
        match score_response(instance, &request.response_text) {
            Ok(r) => ScoreReply {
                id,
                outcome: Outcome::Scored(r.into()),
            },
            Err(e) => ScoreReply::error(id, ErrorCode::Internal, e.to_string()),
        }
    }

    /// Handles one raw request line. Never panics.
    pub fn handle_line(&self, line: &str) -> ScoreReply {
        let value: Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(e) => return ScoreReply::error(String::new(), ErrorCode::ParseError, e.to_string()),
        };
        let id = value.get("id").and_then(Value::as_str).unwrap_or_default().to_string();
        let request: ScoreRequest = match serde_json::from_value(value) {
            Ok(r) => r,
            Err(e) => return ScoreReply::error(id, ErrorCode::ParseError, e.to_string()),
        };
        panic::catch_unwind(AssertUnwindSafe(|| self.score(&request)))
            .unwrap_or_else(|_| ScoreReply::error(id, ErrorCode::Internal, "scorer panicked"))
    }
}

/// Reads requests from `reader` until EOF and writes replies to `writer`
/// from up to `workers` threads. Replies are whole lines but may come back
/// out of request order.
pub fn serve_lines<R, W>(scorer: &Scorer, reader: R, writer: W, workers: usize) -> io::Result<()>
where
    R: BufRead,
    W: Write + Send,
{
    let writer = Mutex::new(writer);
    let (tx, rx) = mpsc::sync_channel::<String>(workers.max(1) * 4);
    let rx = Mutex::new(rx);
    let write_error: Mutex<Option<io::Error>> = Mutex::new(None);
    thread::scope(|s| {
        for _ in 0..workers.max(1) {
            s.spawn(|| loop {
                let line = match rx.lock().unwrap().recv() {
                    Ok(line) => line,
                    Err(_) => return,
                };
                let mut text = serde_json::to_string(&scorer.handle_line(&line)).expect("replies always serialize");
                text.push('\n');
                let mut w = writer.lock().unwrap();
                if let Err(e) = w.write_all(text.as_bytes()).and_then(|_| w.flush()) {
                    write_error.lock().unwrap().get_or_insert(e);
                    return;
                }
            });
        }
        let mut result = Ok(());
        for line in reader.lines() {
            match line {
                Ok(line) if line.trim().is_empty() => continue,
                Ok(line) => {
                    if tx.send(line).is_err() {
                        break;
                    }
                }
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        drop(tx);
        result
    })?;
    match write_error.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn serve_stdio(scorer: &Scorer, workers: usize) -> io::Result<()> {
    serve_lines(scorer, io::stdin().lock(), io::stdout(), workers)
}

/// Accepts connections forever, one thread per connection, each with its
/// own pool of `workers`.
pub fn serve_tcp(scorer: Arc<Scorer>, addr: impl ToSocketAddrs, workers: usize) -> io::Result<()> {
    let listener = TcpListener::bind(addr)?;
    serve_listener(scorer, listener, workers)
}

pub fn serve_listener(scorer: Arc<Scorer>, listener: TcpListener, workers: usize) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let scorer = Arc::clone(&scorer);
        thread::spawn(move || {
            let Ok(read_half) = stream.try_clone() else {
                return;
            };
            let _ = serve_lines(&scorer, io::BufReader::new(read_half), stream, workers);
        });
    }
    Ok(())
}
