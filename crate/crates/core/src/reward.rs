//! Reward: a format term plus a feasibility term that carries the
//! optimality ratio when the answer is feasible.

use serde::{Deserialize, Serialize};

use crate::answer::Violation;
use crate::answer_format::extract_answer;
use crate::error::{EngineError, Result};
use crate::instance::Instance;
use crate::task::Direction;
use crate::tasks::verify;

pub const FORMAT_OK: f64 = 1.0;
pub const FORMAT_BAD: f64 = -1.0;
pub const INFEASIBLE: f64 = -1.5;
pub const FLOOR: f64 = FORMAT_BAD + INFEASIBLE;

/// Clamped and raw optimality ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub clamped: f64,
    /// Unclamped ratio. Infinite when a minimize answer reaches 0 against a
    /// positive baseline.
    pub raw: f64,
}

pub fn compute_ratio(direction: Direction, ms: u64, mh: u64) -> Result<Ratio> {
    let raw = match direction {
        Direction::Maximize if mh == 0 => return Err(EngineError::DegenerateBaseline),
        Direction::Maximize => ms as f64 / mh as f64,
        Direction::Minimize if ms == 0 && mh == 0 => 1.0,
        Direction::Minimize if ms == 0 => f64::INFINITY,
        Direction::Minimize => mh as f64 / ms as f64,
    };
    Ok(Ratio {
        clamped: raw.min(1.0),
        raw,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub instance_id: String,
    pub total: f64,
    pub format_reward: f64,
    pub feasibility_reward: f64,
    pub ratio: Option<f64>,
    /// `null` on the wire when the raw ratio is infinite.
    pub raw_ratio: Option<f64>,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl RewardBreakdown {
    fn new(instance: &Instance, format_reward: f64, feasibility_reward: f64) -> Self {
        RewardBreakdown {
            instance_id: instance.instance_id.clone(),
            total: format_reward + feasibility_reward,
            format_reward,
            feasibility_reward,
            ratio: None,
            raw_ratio: None,
            feasible: false,
            violations: Vec::new(),
        }
    }
}

/// Scores raw response text against an instance.
///
/// Fails only when the instance itself is broken: its payload does not
/// belong to its task, or a maximize task has a zero baseline.
pub fn score_response(instance: &Instance, response_text: &str) -> Result<RewardBreakdown> {
    let parsed = extract_answer(instance.task, response_text);
    let Some(answer) = parsed.answer else {
        let mut r = RewardBreakdown::new(instance, FORMAT_BAD, INFEASIBLE);
        r.violations.push(Violation {
            code: "format".into(),
            detail: parsed.parse_error.unwrap_or_default(),
        });
        return Ok(r);
    };
    let outcome = verify(instance.task, &instance.payload, &answer)?;
    match outcome.objective {
        Some(ms) if outcome.feasible => {
            let ratio = compute_ratio(instance.task.direction(), ms, instance.baseline_value)?;
            let mut r = RewardBreakdown::new(instance, FORMAT_OK, ratio.clamped);
            r.feasible = true;
            r.ratio = Some(ratio.clamped);
            r.raw_ratio = ratio.raw.is_finite().then_some(ratio.raw);
            Ok(r)
        }
        _ => {
            let mut r = RewardBreakdown::new(instance, FORMAT_OK, INFEASIBLE);
            r.violations = outcome.violations;
            Ok(r)
        }
    }
}
