//! Per-task generators, verifiers and baseline solvers, plus the registry
//! dispatch that ties each [`TaskKind`] to its implementations.

pub mod clique_search;
pub mod clustering;
pub mod partitioning;
pub mod planning;
pub mod scheduling;
pub mod selection;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::answer::{wrong_kind, CandidateAnswer, VerifyOutcome};
use crate::error::{EngineError, Result};
use crate::graph::{UndirectedGraph, WeightedGraph};
use crate::rng::{derive_stream, Stream};
use crate::task::{Difficulty, TaskKind};

pub use planning::{HamiltonianPayload, TspPayload};
pub use scheduling::MspPayload;
pub use selection::{KnapsackPayload, SetCoverPayload, SubsetSumPayload};

/// A feasible answer together with its objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub answer: CandidateAnswer,
    pub value: u64,
}

/// Generator output before baseline solving and prompt rendering.
#[derive(Debug, Clone)]
pub struct Generated<P> {
    pub payload: P,
    pub planted: Option<Solution>,
}

impl<P> Generated<P> {
    fn map<Q>(self, f: impl FnOnce(P) -> Q) -> Generated<Q> {
        Generated {
            payload: f(self.payload),
            planted: self.planted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    /// Max clique, max independent set and graph coloring.
    Graph(UndirectedGraph),
    Meetings(MspPayload),
    Bisection(WeightedGraph),
    SubsetSum(SubsetSumPayload),
    SetCover(SetCoverPayload),
    Knapsack(KnapsackPayload),
    Tsp(TspPayload),
    Hamiltonian(HamiltonianPayload),
}

impl Payload {
    /// Decodes the wire form of a payload for `task`.
    pub fn from_value(task: TaskKind, value: serde_json::Value) -> Result<Self> {
        use serde_json::from_value as de;
        let payload = match task {
            TaskKind::MaxClique | TaskKind::MaxIndependentSet | TaskKind::GraphColoring => {
                Payload::Graph(de(value)?)
            }
            TaskKind::MeetingScheduling => Payload::Meetings(de(value)?),
            TaskKind::BalancedBisection => Payload::Bisection(de(value)?),
            TaskKind::SubsetSum => Payload::SubsetSum(de(value)?),
            TaskKind::SetCover => Payload::SetCover(de(value)?),
            TaskKind::Knapsack => Payload::Knapsack(de(value)?),
            TaskKind::Tsp => Payload::Tsp(de(value)?),
            TaskKind::HamiltonianCycle => Payload::Hamiltonian(de(value)?),
        };
        Ok(payload)
    }

    pub fn matches(&self, task: TaskKind) -> bool {
        use TaskKind::*;
        matches!(
            (self, task),
            (Payload::Graph(_), MaxClique | MaxIndependentSet | GraphColoring)
                | (Payload::Meetings(_), MeetingScheduling)
                | (Payload::Bisection(_), BalancedBisection)
                | (Payload::SubsetSum(_), SubsetSum)
                | (Payload::SetCover(_), SetCover)
                | (Payload::Knapsack(_), Knapsack)
                | (Payload::Tsp(_), Tsp)
                | (Payload::Hamiltonian(_), HamiltonianCycle)
        )
    }

    /// Canonical JSON (sorted keys, no whitespace).
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("payloads always serialize");
        value.to_string()
    }

    /// A stable 64-bit fingerprint of the payload contents.
    pub fn fingerprint(&self) -> u64 {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().unwrap())
    }
}

/// Stream for one generated instance. Seeds are namespaced by task and
/// tier, so the same numeric seed gives unrelated instances per tier.
pub fn instance_stream(task: TaskKind, difficulty: Difficulty, seed: u64) -> Stream {
    derive_stream(seed, &format!("{task}:{difficulty}"))
}

pub fn generate_payload(task: TaskKind, difficulty: Difficulty, seed: u64) -> Generated<Payload> {
    let rng = &mut instance_stream(task, difficulty, seed);
    match task {
        TaskKind::MaxClique => clustering::generate_clique(difficulty, rng).map(Payload::Graph),
        TaskKind::MaxIndependentSet => {
            clustering::generate_independent_set(difficulty, rng).map(Payload::Graph)
        }
        TaskKind::GraphColoring => clustering::generate_coloring(difficulty, rng).map(Payload::Graph),
        TaskKind::MeetingScheduling => scheduling::generate_msp(difficulty, rng).map(Payload::Meetings),
        TaskKind::BalancedBisection => {
            partitioning::generate_bisection(difficulty, rng).map(Payload::Bisection)
        }
        TaskKind::SubsetSum => selection::generate_subset_sum(difficulty, rng).map(Payload::SubsetSum),
        TaskKind::SetCover => selection::generate_set_cover(difficulty, rng).map(Payload::SetCover),
        TaskKind::Knapsack => selection::generate_knapsack(difficulty, rng).map(Payload::Knapsack),
        TaskKind::Tsp => planning::generate_tsp(difficulty, rng).map(Payload::Tsp),
        TaskKind::HamiltonianCycle => {
            planning::generate_hamiltonian(difficulty, rng).map(Payload::Hamiltonian)
        }
    }
}

fn mismatch(task: TaskKind) -> EngineError {
    EngineError::payload(task.id(), "payload does not belong to this task")
}

/// Runs the task's rule-based verifier.
pub fn verify(task: TaskKind, payload: &Payload, answer: &CandidateAnswer) -> Result<VerifyOutcome> {
    use CandidateAnswer as A;
    let grammar = task.grammar();
    let outcome = match (task, payload, answer) {
        (TaskKind::MaxClique, Payload::Graph(g), A::VertexList(v)) => clustering::verify_max_clique(g, v),
        (TaskKind::MaxIndependentSet, Payload::Graph(g), A::VertexList(v)) => {
            clustering::verify_max_independent_set(g, v)
        }
        (TaskKind::GraphColoring, Payload::Graph(g), A::ColorAssignment(c)) => {
            clustering::verify_graph_coloring(g, c)
        }
        (TaskKind::MeetingScheduling, Payload::Meetings(p), A::Schedule(s)) => scheduling::verify_msp(p, s),
        (TaskKind::BalancedBisection, Payload::Bisection(g), A::PartitionPair(a, b)) => {
            partitioning::verify_bisection(g, a, b)
        }
        (TaskKind::SubsetSum, Payload::SubsetSum(p), A::IndexList(v)) => selection::verify_subset_sum(p, v),
        (TaskKind::SetCover, Payload::SetCover(p), a) => selection::verify_set_cover(p, a),
        (TaskKind::Knapsack, Payload::Knapsack(p), A::IndexList(v)) => selection::verify_knapsack(p, v),
        (TaskKind::Tsp, Payload::Tsp(p), A::Route(r)) => planning::verify_tsp(p, r),
        (TaskKind::HamiltonianCycle, Payload::Hamiltonian(p), A::VertexList(v)) => {
            planning::verify_hamiltonian(p, v)
        }
        (t, p, a) if p.matches(t) => wrong_kind(grammar, a),
        (t, ..) => return Err(mismatch(t)),
    };
    Ok(outcome)
}

/// Runs the task's baseline solver. `planted`, when known, is used as a
/// starting point or certified answer.
pub fn solve(task: TaskKind, payload: &Payload, planted: Option<&Solution>) -> Result<Solution> {
    let solution = match (task, payload) {
        (TaskKind::MaxClique, Payload::Graph(g)) => clustering::baseline_max_clique(g, planted),
        (TaskKind::MaxIndependentSet, Payload::Graph(g)) => {
            clustering::baseline_max_independent_set(g, planted)
        }
        (TaskKind::GraphColoring, Payload::Graph(g)) => clustering::baseline_graph_coloring(g, planted),
        (TaskKind::MeetingScheduling, Payload::Meetings(p)) => scheduling::baseline_msp(p),
        (TaskKind::BalancedBisection, Payload::Bisection(g)) => {
            let mut rng = derive_stream(payload.fingerprint(), "bisection:kl-starts");
            partitioning::baseline_bisection(g, planted, &mut rng)
        }
        (TaskKind::SubsetSum, Payload::SubsetSum(p)) => selection::baseline_subset_sum(p, planted),
        (TaskKind::SetCover, Payload::SetCover(p)) => selection::baseline_set_cover(p),
        (TaskKind::Knapsack, Payload::Knapsack(p)) => selection::baseline_knapsack(p, planted),
        (TaskKind::Tsp, Payload::Tsp(p)) => planning::baseline_tsp(p, planning::DEFAULT_TSP_BUDGET),
        (TaskKind::HamiltonianCycle, Payload::Hamiltonian(p)) => planning::baseline_hamiltonian(p, planted),
        (t, _) => return Err(mismatch(t)),
    };
    Ok(solution)
}
