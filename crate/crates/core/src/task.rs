//! Task registry: the ten task kinds, their categories, objective
//! directions and answer grammars.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    MaxClique,
    MaxIndependentSet,
    GraphColoring,
    MeetingScheduling,
    BalancedBisection,
    SubsetSum,
    SetCover,
    Knapsack,
    Tsp,
    HamiltonianCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    GraphClustering,
    ResourceScheduling,
    GraphPartitioning,
    SubsetSelection,
    PathPlanning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
    Benchmark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Maximize,
    Minimize,
}

/// Shape of the answer a task expects after the `Answer:` marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grammar {
    VertexList,
    IndexList,
    ColorAssignment,
    PartitionPair,
    Schedule,
    Route,
}

impl TaskKind {
    /// Registry order. Also the order used when restricting a dataset to
    /// the first `k` tasks.
    pub const ALL: [TaskKind; 10] = [
        TaskKind::MaxClique,
        TaskKind::MaxIndependentSet,
        TaskKind::GraphColoring,
        TaskKind::MeetingScheduling,
        TaskKind::BalancedBisection,
        TaskKind::SubsetSum,
        TaskKind::SetCover,
        TaskKind::Knapsack,
        TaskKind::Tsp,
        TaskKind::HamiltonianCycle,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TaskKind::MaxClique => "max_clique",
            TaskKind::MaxIndependentSet => "max_independent_set",
            TaskKind::GraphColoring => "graph_coloring",
            TaskKind::MeetingScheduling => "meeting_scheduling",
            TaskKind::BalancedBisection => "balanced_bisection",
            TaskKind::SubsetSum => "subset_sum",
            TaskKind::SetCover => "set_cover",
            TaskKind::Knapsack => "knapsack",
            TaskKind::Tsp => "tsp",
            TaskKind::HamiltonianCycle => "hamiltonian_cycle",
        }
    }

    pub fn category(self) -> Category {
        use TaskKind::*;
        match self {
            MaxClique | MaxIndependentSet | GraphColoring => Category::GraphClustering,
            MeetingScheduling => Category::ResourceScheduling,
            BalancedBisection => Category::GraphPartitioning,
            SubsetSum | SetCover | Knapsack => Category::SubsetSelection,
            Tsp | HamiltonianCycle => Category::PathPlanning,
        }
    }

    pub fn direction(self) -> Direction {
        use TaskKind::*;
        match self {
            MaxClique | MaxIndependentSet | SubsetSum | Knapsack | MeetingScheduling
            | HamiltonianCycle => Direction::Maximize,
            GraphColoring | SetCover | BalancedBisection | Tsp => Direction::Minimize,
        }
    }

    pub fn grammar(self) -> Grammar {
        use TaskKind::*;
        match self {
            MaxClique | MaxIndependentSet | HamiltonianCycle => Grammar::VertexList,
            SubsetSum | SetCover | Knapsack => Grammar::IndexList,
            GraphColoring => Grammar::ColorAssignment,
            BalancedBisection => Grammar::PartitionPair,
            MeetingScheduling => Grammar::Schedule,
            Tsp => Grammar::Route,
        }
    }
}

/// Resolve a task id against the registry.
pub fn registry_lookup(task_id: &str) -> Result<TaskKind> {
    TaskKind::ALL
        .into_iter()
        .find(|t| t.id() == task_id)
        .ok_or_else(|| EngineError::UnknownTask(task_id.to_string()))
}

impl FromStr for TaskKind {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        registry_lookup(s)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::GraphClustering,
        Category::ResourceScheduling,
        Category::GraphPartitioning,
        Category::SubsetSelection,
        Category::PathPlanning,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Category::GraphClustering => "graph_clustering",
            Category::ResourceScheduling => "resource_scheduling",
            Category::GraphPartitioning => "graph_partitioning",
            Category::SubsetSelection => "subset_selection",
            Category::PathPlanning => "path_planning",
        }
    }

    pub fn tasks(self) -> impl Iterator<Item = TaskKind> {
        TaskKind::ALL.into_iter().filter(move |t| t.category() == self)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Difficulty {
    pub const ALL: [Difficulty; 4] = [
        Difficulty::Easy,
        Difficulty::Medium,
        Difficulty::Hard,
        Difficulty::Benchmark,
    ];

    /// Tiers used for training data.
    pub const TRAINING: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard];

    pub fn id(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
            Difficulty::Benchmark => "benchmark",
        }
    }

    /// Picks the entry for this tier out of a four-tier parameter table.
    pub(crate) fn pick<T: Copy>(self, table: [T; 4]) -> T {
        table[self as usize]
    }
}

impl FromStr for Difficulty {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        Difficulty::ALL
            .into_iter()
            .find(|d| d.id() == s)
            .ok_or_else(|| EngineError::UnknownDifficulty(s.to_string()))
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Direction {
    pub fn id(self) -> &'static str {
        match self {
            Direction::Maximize => "maximize",
            Direction::Minimize => "minimize",
        }
    }
}

impl FromStr for Direction {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximize" => Ok(Direction::Maximize),
            "minimize" => Ok(Direction::Minimize),
            other => Err(EngineError::InvalidMix(format!("unknown direction `{other}`"))),
        }
    }
}

impl Grammar {
    pub fn id(self) -> &'static str {
        match self {
            Grammar::VertexList => "vertex_list",
            Grammar::IndexList => "index_list",
            Grammar::ColorAssignment => "color_assignment",
            Grammar::PartitionPair => "partition_pair",
            Grammar::Schedule => "schedule",
            Grammar::Route => "route",
        }
    }
}
