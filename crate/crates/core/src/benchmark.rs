//! NP-Bench: a fixed suite of benchmark-tier instances and SR/AR reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::instance::Instance;
use crate::reward::{score_response, RewardBreakdown};
use crate::rng::derive_seed;
use crate::task::{Category, Difficulty, TaskKind};

pub const INSTANCES_PER_TASK: usize = 100;

/// One model response, as stored in response files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub instance_id: String,
    pub response_text: String,
}

pub fn suite_seed(seed: u64, task: TaskKind, index: usize) -> u64 {
    derive_seed(seed, &format!("npbench:{task}:{index}"))
}

/// 100 benchmark-tier instances per task, in registry order.
pub fn build_npbench(seed: u64) -> Vec<Instance> {
    let jobs: Vec<(TaskKind, u64)> = TaskKind::ALL
        .iter()
        .flat_map(|&t| (0..INSTANCES_PER_TASK).map(move |i| (t, suite_seed(seed, t, i))))
        .collect();
    jobs.into_par_iter()
        .map(|(t, s)| Instance::generate(t, Difficulty::Benchmark, s))
        .collect()
}

/// Scores each response against its instance, preserving input order.
pub fn score_responses(suite: &[Instance], responses: &[ResponseRecord]) -> Result<Vec<RewardBreakdown>> {
    let by_id: HashMap<&str, &Instance> = suite.iter().map(|i| (i.instance_id.as_str(), i)).collect();
    responses
        .par_iter()
        .map(|r| {
            let inst = by_id
                .get(r.instance_id.as_str())
                .ok_or_else(|| EngineError::UnknownInstance(r.instance_id.clone()))?;
            score_response(inst, &r.response_text)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Overall is the mean of the category means.
    #[default]
    Category,
    /// Overall is the mean over tasks.
    Task,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskScore {
    pub task: TaskKind,
    pub category: Category,
    pub sr: f64,
    pub ar: f64,
    /// Suite instances of this task; missing responses count as infeasible.
    pub count: usize,
    pub responded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupScore {
    pub sr: f64,
    pub ar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub aggregation: Aggregation,
    pub tasks: Vec<TaskScore>,
    pub categories: BTreeMap<Category, GroupScore>,
    pub overall: GroupScore,
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// SR/AR per task, per category and overall. Every response must name a
/// suite instance, and at most once.
pub fn evaluate(suite: &[Instance], responses: &[ResponseRecord], aggregation: Aggregation) -> Result<EvalReport> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, r) in responses.iter().enumerate() {
        if seen.insert(r.instance_id.as_str(), i).is_some() {
            return Err(EngineError::DuplicateResponse(r.instance_id.clone()));
        }
    }
    let scores = score_responses(suite, responses)?;

    let mut tasks = Vec::new();
    for task in TaskKind::ALL {
        let mut count = 0;
        let mut responded = 0;
        let mut feasible = 0usize;
        let mut ratio_sum = 0.0;
        for inst in suite.iter().filter(|i| i.task == task) {
            count += 1;
            if let Some(&j) = seen.get(inst.instance_id.as_str()) {
                responded += 1;
                if let Some(r) = scores[j].ratio {
                    feasible += 1;
                    ratio_sum += r;
                }
            }
        }
        if count == 0 {
            continue;
        }
        tasks.push(TaskScore {
            task,
            category: task.category(),
            sr: 100.0 * feasible as f64 / count as f64,
            ar: 100.0 * ratio_sum / count as f64,
            count,
            responded,
        });
    }

    let mut categories = BTreeMap::new();
    for cat in Category::ALL {
        let members: Vec<&TaskScore> = tasks.iter().filter(|t| t.category == cat).collect();
        if !members.is_empty() {
            categories.insert(
                cat,
                GroupScore {
                    sr: mean(members.iter().map(|t| t.sr)),
                    ar: mean(members.iter().map(|t| t.ar)),
                },
            );
        }
    }
    let overall = match aggregation {
        Aggregation::Category => GroupScore {
            sr: mean(categories.values().map(|c| c.sr)),
            ar: mean(categories.values().map(|c| c.ar)),
        },
        Aggregation::Task => GroupScore {
            sr: mean(tasks.iter().map(|t| t.sr)),
            ar: mean(tasks.iter().map(|t| t.ar)),
        },
    };
    Ok(EvalReport {
        aggregation,
        tasks,
        categories,
        overall,
    })
}

/// Plain-text table: one row per task, then categories, then overall.
impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "{:<22} {:>7} {:>7} {:>9}", "task", "SR", "AR", "responses")?;
        for t in &self.tasks {
            writeln!(
                out,
                "{:<22} {:>7.1} {:>7.1} {:>4}/{:<4}",
                t.task.id(),
                t.sr,
                t.ar,
                t.responded,
                t.count
            )?;
        }
        writeln!(out)?;
        writeln!(out, "{:<22} {:>7} {:>7}", "category", "SR", "AR")?;
        for (c, s) in &self.categories {
            writeln!(out, "{:<22} {:>7.1} {:>7.1}", c.id(), s.sr, s.ar)?;
        }
        writeln!(out)?;
        write!(out, "{:<22} {:>7.1} {:>7.1}", "overall", self.overall.sr, self.overall.ar)?;
        f.write_str(&out)
    }
}
