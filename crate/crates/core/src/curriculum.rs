//! Training dataset emission with easy/medium/hard mixes, curriculum order
//! and multi-stage manifests.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{EngineError, Result};
use crate::instance::Instance;
use crate::rng::{derive_seed, derive_stream};
use crate::task::{Difficulty, TaskKind};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixSpec {
    /// Easy, medium and hard weights.
    pub proportions: [u64; 3],
    pub total: usize,
    pub tasks: Vec<TaskKind>,
    pub stages: usize,
    pub curriculum_order: bool,
}

impl MixSpec {
    pub fn new(proportions: [u64; 3], total: usize) -> Self {
        MixSpec {
            proportions,
            total,
            tasks: TaskKind::ALL.to_vec(),
            stages: 1,
            curriculum_order: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(EngineError::InvalidMix(m.into()));
        if self.proportions.iter().sum::<u64>() == 0 {
            return bad("proportions must not all be zero");
        }
        if self.total == 0 {
            return bad("total must be positive");
        }
        if self.tasks.is_empty() {
            return bad("task list is empty");
        }
        if self.stages == 0 {
            return bad("stages must be positive");
        }
        Ok(())
    }

    /// `floor(total * p / sum)` per tier; the remainder goes to the largest
    /// proportion, the earliest tier on ties.
    pub fn tier_counts(&self) -> [usize; 3] {
        let sum: u64 = self.proportions.iter().sum();
        let total = self.total as u128;
        let mut counts = self.proportions.map(|p| (total * p as u128 / sum as u128) as usize);
        let largest = (0..3).fold(0, |best, i| {
            if self.proportions[i] > self.proportions[best] {
                i
            } else {
                best
            }
        });
        counts[largest] += self.total - counts.iter().sum::<usize>();
        counts
    }
}

/// Restricts `mix` to the first `k` tasks in registry order.
pub fn scale_tasks(mix: &MixSpec, k: usize) -> Result<MixSpec> {
    if !(1..=TaskKind::ALL.len()).contains(&k) {
        return Err(EngineError::TaskCountOutOfRange(k));
    }
    Ok(MixSpec {
        tasks: TaskKind::ALL[..k].to_vec(),
        ..mix.clone()
    })
}

/// Generates the dataset and splits it into `mix.stages` stages.
///
/// Tier slot `j` goes to task `j mod |tasks|`. With curriculum order the
/// records are sorted by (tier, task, seed) and record `i` lands in stage
/// `i mod stages`, so each stage is itself curriculum-ordered.
pub fn build_dataset(mix: &MixSpec, seed: u64) -> Result<Vec<Vec<Instance>>> {
    mix.validate()?;
    let mut jobs = Vec::with_capacity(mix.total);
    for (tier, count) in Difficulty::TRAINING.into_iter().zip(mix.tier_counts()) {
        for j in 0..count {
            let task = mix.tasks[j % mix.tasks.len()];
            jobs.push((task, tier, derive_seed(seed, &format!("dataset:{tier}:{j}"))));
        }
    }
    if mix.curriculum_order {
        jobs.sort_by_key(|&(task, tier, s)| (tier, task, s));
    } else {
        jobs.shuffle(&mut derive_stream(seed, "dataset:shuffle"));
    }
    let records: Vec<Instance> = jobs
        .into_par_iter()
        .map(|(task, tier, s)| Instance::generate(task, tier, s))
        .collect();
    let mut stages = vec![Vec::new(); mix.stages];
    for (i, r) in records.into_iter().enumerate() {
        stages[i % mix.stages].push(r);
    }
    Ok(stages)
}

/// A training record: the instance fields plus the answer grammar id.
pub fn record_line(instance: &Instance) -> String {
    let mut value = instance.to_value();
    value
        .as_object_mut()
        .expect("instances serialize to objects")
        .insert("answer_grammar".into(), Value::from(instance.task.grammar().id()));
    value.to_string()
}

/// Parses a training record, checking its grammar id against its task.
pub fn parse_record(line: &str) -> Result<Instance> {
    let mut value: Value = serde_json::from_str(line)?;
    let grammar = value.as_object_mut().and_then(|o| o.remove("answer_grammar"));
    let instance = Instance::from_value(value)?;
    if grammar.as_ref().and_then(Value::as_str) != Some(instance.task.grammar().id()) {
        return Err(EngineError::payload(instance.task.id(), "missing or wrong answer_grammar"));
    }
    Ok(instance)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub file: String,
    pub records: usize,
    /// Records per tier, easy/medium/hard.
    pub tiers: [usize; 3],
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub mix: MixSpec,
    pub seed: u64,
    pub tier_counts: [usize; 3],
    pub stages: Vec<StageEntry>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `stage_<k>.jsonl` files and `manifest.json` into `out_dir`.
pub fn emit_dataset(mix: &MixSpec, seed: u64, out_dir: &Path) -> Result<Manifest> {
    let stages = build_dataset(mix, seed)?;
    fs::create_dir_all(out_dir)?;
    let mut entries = Vec::new();
    for (k, records) in stages.iter().enumerate() {
        let mut body = String::new();
        let mut tiers = [0; 3];
        for r in records {
            body.push_str(&record_line(r));
            body.push('\n');
            tiers[r.difficulty as usize] += 1;
        }
        let file = format!("stage_{}.jsonl", k + 1);
        fs::write(out_dir.join(&file), &body)?;
        entries.push(StageEntry {
            file,
            records: records.len(),
            tiers,
            sha256: hex(&Sha256::digest(body.as_bytes())),
        });
    }
    let manifest = Manifest {
        mix: mix.clone(),
        seed,
        tier_counts: mix.tier_counts(),
        stages: entries,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(out_dir.join(MANIFEST_FILE), text)?;
    Ok(manifest)
}
