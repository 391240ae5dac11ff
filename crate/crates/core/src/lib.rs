//! Instance generation, verification, baseline solving, reward scoring and
//! dataset emission for ten NP-hard optimization tasks.

pub mod answer;
pub mod answer_format;
pub mod benchmark;
pub mod curriculum;
pub mod error;
pub mod graph;
pub mod instance;
pub mod jsonl;
mod keyed;
pub mod reward;
pub mod rng;
pub mod service;
pub mod task;
pub mod tasks;

pub use answer::{CandidateAnswer, ScheduleEntry, VerifyOutcome, Violation};
pub use benchmark::{build_npbench, evaluate, EvalReport, ResponseRecord};
pub use curriculum::{emit_dataset, scale_tasks, MixSpec};
pub use answer_format::{extract_answer, parse_answer_literal, render_prompt, ParseResult};
pub use error::{EngineError, Result};
pub use graph::{UndirectedGraph, WeightedGraph};
pub use instance::{parse_instance, serialize_instance, Instance};
pub use reward::{compute_ratio, score_response, RewardBreakdown};
pub use rng::{derive_seed, derive_stream};
pub use task::{registry_lookup, Category, Difficulty, Direction, Grammar, TaskKind};
pub use tasks::{generate_payload, solve, verify, Payload, Solution};
