use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct UndirectedGraph {
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    #[serde(with = "crate::keyed")]
    adjacency: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        UndirectedGraph {
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds from adjacency lists, checking symmetry and range.
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let n = adjacency.len();
        let mut g = Self::empty(n);
        for (u, nbrs) in adjacency.iter().enumerate() {
            for &v in nbrs {
                if v >= n {
                    return Err(EngineError::payload("graph", format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(EngineError::payload("graph", format!("self-loop at {u}")));
                }
                if !adjacency[v].contains(&u) {
                    return Err(EngineError::payload("graph", format!("edge {u}-{v} is not symmetric")));
                }
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Returns false when the edge already existed or would be a self-loop.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adjacency[u].binary_search(&v) {
            Ok(pos) => {
                self.adjacency[u].remove(pos);
                let pos = self.adjacency[v].binary_search(&u).unwrap();
                self.adjacency[v].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn complement(&self) -> Self {
        let n = self.n();
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }
}

impl TryFrom<RawGraph> for UndirectedGraph {
    type Error = EngineError;

    fn try_from(raw: RawGraph) -> Result<Self> {
        if raw.adjacency.len() != raw.n {
            return Err(EngineError::payload(
                "graph",
                format!("n = {} but {} adjacency lists", raw.n, raw.adjacency.len()),
            ));
        }
        UndirectedGraph::from_adjacency(raw.adjacency)
    }
}

impl From<UndirectedGraph> for RawGraph {
    fn from(g: UndirectedGraph) -> Self {
        RawGraph {
            n: g.n(),
            adjacency: g.adjacency,
        }
    }
}

/// Undirected graph with positive integer edge weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeighted", into = "RawWeighted")]
pub struct WeightedGraph {
    weights: Vec<BTreeMap<usize, u64>>,
}

#[derive(Serialize, Deserialize)]
struct RawWeighted {
    n: usize,
    #[serde(with = "crate::keyed")]
    weights: Vec<BTreeMap<usize, u64>>,
}

impl WeightedGraph {
    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            weights: vec![BTreeMap::new(); n],
        }
    }

    pub fn from_weights(weights: Vec<BTreeMap<usize, u64>>) -> Result<Self> {
        let n = weights.len();
        for (u, row) in weights.iter().enumerate() {
            for (&v, &w) in row {
                if v >= n || v == u {
                    return Err(EngineError::payload("weighted graph", format!("bad edge {u}-{v}")));
                }
                if w == 0 {
                    return Err(EngineError::payload("weighted graph", format!("zero weight on {u}-{v}")));
                }
                if weights[v].get(&u) != Some(&w) {
                    return Err(EngineError::payload(
                        "weighted graph",
                        format!("edge {u}-{v} is not symmetric"),
                    ));
                }
            }
        }
        Ok(WeightedGraph { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        self.weights[u].get(&v).copied().unwrap_or(0)
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: u64) {
        assert!(u != v && w > 0);
        self.weights[u].insert(v, w);
        self.weights[v].insert(u, w);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.weights[u].remove(&v);
        self.weights[v].remove(&u);
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.weights[v].iter().map(|(&u, &w)| (u, w))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.range(u + 1..).map(move |(&v, &w)| (u, v, w)))
    }

    /// Total weight of edges whose endpoints fall on different sides.
    pub fn cut_weight(&self, side: &[bool]) -> u64 {
        self.edges()
            .filter(|&(u, v, _)| side[u] != side[v])
            .map(|(_, _, w)| w)
            .sum()
    }

    pub fn rows(&self) -> &[BTreeMap<usize, u64>] {
        &self.weights
    }
}

impl TryFrom<RawWeighted> for WeightedGraph {
    type Error = EngineError;

    fn try_from(raw: RawWeighted) -> Result<Self> {
        if raw.weights.len() != raw.n {
            return Err(EngineError::payload(
                "weighted graph",
                format!("n = {} but {} weight rows", raw.n, raw.weights.len()),
            ));
        }
        WeightedGraph::from_weights(raw.weights)
    }
}

impl From<WeightedGraph> for RawWeighted {
    fn from(g: WeightedGraph) -> Self {
        RawWeighted {
            n: g.n(),
            weights: g.weights,
        }
    }
}
