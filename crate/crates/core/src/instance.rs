//! Generated problem instances and their canonical JSONL form.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::answer::CandidateAnswer;
use crate::answer_format::{parse_answer_literal, render_prompt};
use crate::error::{EngineError, Result};
use crate::task::{Difficulty, TaskKind};
use crate::tasks::{generate_payload, solve, Payload, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub task: TaskKind,
    pub difficulty: Difficulty,
    pub seed: u64,
    pub instance_id: String,
    pub payload: Payload,
    /// Objective of `baseline_solution`, the M_h every reward is anchored to.
    pub baseline_value: u64,
    pub baseline_solution: CandidateAnswer,
    pub planted_solution: Option<CandidateAnswer>,
    pub planted_value: Option<u64>,
    pub prompt: String,
}

pub fn instance_id(task: TaskKind, difficulty: Difficulty, seed: u64) -> String {
    format!("{task}:{difficulty}:{seed}")
}

impl Instance {
    /// Generates, solves and renders one instance.
    pub fn generate(task: TaskKind, difficulty: Difficulty, seed: u64) -> Instance {
        let generated = generate_payload(task, difficulty, seed);
        let baseline = solve(task, &generated.payload, generated.planted.as_ref())
            .expect("generator payloads always match their task");
        Instance::assemble(task, difficulty, seed, generated.payload, baseline, generated.planted)
    }

    fn assemble(
        task: TaskKind,
        difficulty: Difficulty,
        seed: u64,
        payload: Payload,
        baseline: Solution,
        planted: Option<Solution>,
    ) -> Instance {
        let prompt = render_prompt(task, &payload);
        let (planted_solution, planted_value) = match planted {
            Some(s) => (Some(s.answer), Some(s.value)),
            None => (None, None),
        };
        Instance {
            task,
            difficulty,
            seed,
            instance_id: instance_id(task, difficulty, seed),
            payload,
            baseline_value: baseline.value,
            baseline_solution: baseline.answer,
            planted_solution,
            planted_value,
            prompt,
        }
    }

    pub fn baseline(&self) -> Solution {
        Solution {
            answer: self.baseline_solution.clone(),
            value: self.baseline_value,
        }
    }

    pub fn planted(&self) -> Option<Solution> {
        Some(Solution {
            answer: self.planted_solution.clone()?,
            value: self.planted_value?,
        })
    }

    pub fn to_value(&self) -> Value {
        let wire = Wire {
            task: self.task,
            difficulty: self.difficulty,
            seed: self.seed,
            instance_id: self.instance_id.clone(),
            payload: serde_json::to_value(&self.payload).expect("payloads always serialize"),
            baseline_value: self.baseline_value,
            baseline_solution: self.baseline_solution.to_string(),
            planted_solution: self.planted_solution.as_ref().map(ToString::to_string),
            planted_value: self.planted_value,
            prompt: self.prompt.clone(),
        };
        serde_json::to_value(wire).expect("instances always serialize")
    }

    pub fn from_value(value: Value) -> Result<Instance> {
        let wire: Wire = serde_json::from_value(value)?;
        let task = wire.task;
        let expected = instance_id(task, wire.difficulty, wire.seed);
        if wire.instance_id != expected {
            return Err(EngineError::payload(
                task.id(),
                format!("instance_id `{}` should be `{expected}`", wire.instance_id),
            ));
        }
        if wire.planted_solution.is_some() != wire.planted_value.is_some() {
            return Err(EngineError::payload(
                task.id(),
                "planted_solution and planted_value must appear together",
            ));
        }
        let planted_solution = wire
            .planted_solution
            .map(|s| parse_answer_literal(task, &s))
            .transpose()?;
        Ok(Instance {
            task,
            difficulty: wire.difficulty,
            seed: wire.seed,
            instance_id: wire.instance_id,
            payload: Payload::from_value(task, wire.payload)?,
            baseline_value: wire.baseline_value,
            baseline_solution: parse_answer_literal(task, &wire.baseline_solution)?,
            planted_solution,
            planted_value: wire.planted_value,
            prompt: wire.prompt,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    task: TaskKind,
    difficulty: Difficulty,
    seed: u64,
    instance_id: String,
    payload: Value,
    baseline_value: u64,
    baseline_solution: String,
    #[serde(default)]
    planted_solution: Option<String>,
    #[serde(default)]
    planted_value: Option<u64>,
    prompt: String,
}

/// One line of JSON with sorted keys and no trailing newline.
pub fn serialize_instance(instance: &Instance) -> String {
    instance.to_value().to_string()
}

pub fn parse_instance(line: &str) -> Result<Instance> {
    Instance::from_value(serde_json::from_str(line)?)
}
