//! Traveling salesman and the longest-cycle Hamiltonian variant.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Generated, Solution};
use crate::answer::{CandidateAnswer, Checker, VerifyOutcome};
use crate::error::{EngineError, Result};
use crate::graph::UndirectedGraph;
use crate::rng::Stream;
use crate::task::Difficulty;

pub const DISTANCE_RANGE: (u64, u64) = (1, 100);
pub const DEFAULT_TSP_BUDGET: Duration = Duration::from_secs(2);
/// Every city is used as a nearest-neighbor start up to this size.
pub const ALL_STARTS_LIMIT: usize = 60;

const TSP_CITIES: [(usize, usize); 4] = [(10, 20), (20, 30), (35, 45), (45, 55)];
const HAM_VERTICES: [(usize, usize); 4] = [(15, 20), (20, 30), (30, 40), (40, 50)];
const HAM_DENSITY: [f64; 4] = [0.2, 0.3, 0.4, 0.5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanningParams {
    pub tsp_cities: (usize, usize),
    pub hamiltonian_vertices: (usize, usize),
    pub hamiltonian_density: f64,
}

impl PlanningParams {
    pub fn for_tier(d: Difficulty) -> Self {
        PlanningParams {
            tsp_cities: d.pick(TSP_CITIES),
            hamiltonian_vertices: d.pick(HAM_VERTICES),
            hamiltonian_density: d.pick(HAM_DENSITY),
        }
    }
}

/// Complete symmetric distance table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTsp", into = "RawTsp")]
pub struct TspPayload {
    distances: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct RawTsp {
    n: usize,
    #[serde(with = "crate::keyed")]
    distances: Vec<std::collections::BTreeMap<usize, u64>>,
}

impl TspPayload {
    pub fn from_matrix(distances: Vec<Vec<u64>>) -> Result<Self> {
        let n = distances.len();
        for (i, row) in distances.iter().enumerate() {
            if row.len() != n {
                return Err(EngineError::payload("tsp", format!("row {i} has {} entries", row.len())));
            }
            for j in 0..n {
                if i != j && (row[j] == 0 || row[j] != distances[j][i]) {
                    return Err(EngineError::payload("tsp", format!("distance {i}-{j} is zero or asymmetric")));
                }
            }
        }
        Ok(TspPayload { distances })
    }

    pub fn n(&self) -> usize {
        self.distances.len()
    }

    pub fn distance(&self, a: usize, b: usize) -> u64 {
        self.distances[a][b]
    }

    /// Length of the closed tour through `order` (first city not repeated).
    pub fn tour_length(&self, order: &[usize]) -> u64 {
        if order.is_empty() {
            return 0;
        }
        order
            .iter()
            .zip(order.iter().cycle().skip(1))
            .map(|(&a, &b)| self.distance(a, b))
            .sum()
    }
}

impl TryFrom<RawTsp> for TspPayload {
    type Error = EngineError;

    fn try_from(raw: RawTsp) -> Result<Self> {
        if raw.distances.len() != raw.n {
            return Err(EngineError::payload("tsp", "n does not match the distance rows"));
        }
        let n = raw.n;
        let mut m = vec![vec![0; n]; n];
        for (i, row) in raw.distances.iter().enumerate() {
            if row.len() != n.saturating_sub(1) || row.contains_key(&i) {
                return Err(EngineError::payload("tsp", format!("row {i} is not complete")));
            }
            for (&j, &d) in row {
                if j >= n {
                    return Err(EngineError::payload("tsp", format!("city {j} out of range")));
                }
                m[i][j] = d;
            }
        }
        TspPayload::from_matrix(m)
    }
}

impl From<TspPayload> for RawTsp {
    fn from(p: TspPayload) -> Self {
        let n = p.n();
        RawTsp {
            n,
            distances: p
                .distances
                .into_iter()
                .enumerate()
                .map(|(i, row)| row.into_iter().enumerate().filter(|&(j, _)| j != i).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHamiltonian", into = "RawHamiltonian")]
pub struct HamiltonianPayload {
    pub graph: UndirectedGraph,
    pub density: f64,
}

#[derive(Serialize, Deserialize)]
struct RawHamiltonian {
    n: usize,
    #[serde(with = "crate::keyed")]
    adjacency: Vec<Vec<usize>>,
    density: f64,
}

impl TryFrom<RawHamiltonian> for HamiltonianPayload {
    type Error = EngineError;

    fn try_from(raw: RawHamiltonian) -> Result<Self> {
        if raw.adjacency.len() != raw.n {
            return Err(EngineError::payload("hamiltonian_cycle", "n does not match adjacency"));
        }
        Ok(HamiltonianPayload {
            graph: UndirectedGraph::from_adjacency(raw.adjacency)?,
            density: raw.density,
        })
    }
}

impl From<HamiltonianPayload> for RawHamiltonian {
    fn from(p: HamiltonianPayload) -> Self {
        RawHamiltonian {
            n: p.graph.n(),
            adjacency: p.graph.adjacency().to_vec(),
            density: p.density,
        }
    }
}

pub fn random_tsp(n: usize, rng: &mut Stream) -> TspPayload {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rng.gen_range(DISTANCE_RANGE.0..=DISTANCE_RANGE.1);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    TspPayload { distances: m }
}

pub fn generate_tsp(d: Difficulty, rng: &mut Stream) -> Generated<TspPayload> {
    let (lo, hi) = PlanningParams::for_tier(d).tsp_cities;
    let n = rng.gen_range(lo..=hi);
    Generated {
        payload: random_tsp(n, rng),
        planted: None,
    }
}

/// Plants a random Hamiltonian cycle and fills to the tier's density.
pub fn generate_hamiltonian(d: Difficulty, rng: &mut Stream) -> Generated<HamiltonianPayload> {
    let params = PlanningParams::for_tier(d);
    let n = rng.gen_range(params.hamiltonian_vertices.0..=params.hamiltonian_vertices.1);
    let density = params.hamiltonian_density;
    let mut cycle: Vec<usize> = (0..n).collect();
    cycle.shuffle(rng);
    let mut g = UndirectedGraph::empty(n);
    for i in 0..n {
        g.add_edge(cycle[i], cycle[(i + 1) % n]);
    }
    let target = ((density * (n * (n - 1) / 2) as f64).round() as usize).max(n);
    while g.edge_count() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        g.add_edge(u, v);
    }
    Generated {
        payload: HamiltonianPayload { graph: g, density },
        planted: Some(Solution {
            answer: CandidateAnswer::VertexList(cycle),
            value: n as u64,
        }),
    }
}

pub fn verify_tsp(p: &TspPayload, route: &[usize]) -> VerifyOutcome {
    let n = p.n();
    let mut c = Checker::new();
    if route.len() != n + 1 {
        c.fail(
            "wrong-length",
            format!("route has {} entries, expected {} (n + 1)", route.len(), n + 1),
        );
    }
    if route.len() >= 2 && route.first() != route.last() {
        c.fail("not-closed", "route must end at its starting city");
    }
    let body = &route[..route.len().saturating_sub(1)];
    if c.ids(body, n, "city") {
        let mut seen = vec![false; n];
        for &v in body {
            seen[v] = true;
        }
        let missing: Vec<usize> = (0..n).filter(|&v| !seen[v]).collect();
        if !missing.is_empty() {
            c.fail("unvisited", format!("cities {missing:?} are never visited"));
        }
    }
    if route.last().is_some_and(|&v| v >= n) {
        c.fail("out-of-range", "final city does not exist");
    }
    c.finish(|| route.windows(2).map(|w| p.distance(w[0], w[1])).sum())
}

pub fn verify_hamiltonian(p: &HamiltonianPayload, cycle: &[usize]) -> VerifyOutcome {
    let g = &p.graph;
    let mut c = Checker::new();
    if cycle.len() < 3 {
        c.fail("too-short", format!("a cycle needs at least 3 vertices, got {}", cycle.len()));
    }
    if c.ids(cycle, g.n(), "vertex") && cycle.len() >= 2 {
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            if !g.has_edge(u, v) {
                c.fail("missing-edge", format!("edge {u}-{v} is not in the graph"));
            }
        }
    }
    c.finish(|| cycle.len() as u64)
}

fn nearest_neighbor(p: &TspPayload, start: usize) -> Vec<usize> {
    let n = p.n();
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    tour.push(cur);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (p.distance(cur, v), v))
            .unwrap();
        visited[next] = true;
        tour.push(next);
        cur = next;
    }
    tour
}

/// First-improvement 2-opt over lexicographic `(i, j)`; rescans from the
/// start after every applied move. Stops at a local optimum or deadline.
pub fn two_opt(p: &TspPayload, tour: &mut [usize], deadline: Option<Instant>) {
    let n = tour.len();
    if n < 4 {
        return;
    }
    let d = |a: usize, b: usize| p.distance(a, b) as i64;
    'scan: loop {
        if deadline.is_some_and(|t| Instant::now() >= t) {
            return;
        }
        for i in 0..n - 1 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (tour[i], tour[i + 1]);
                let (c, e) = (tour[j], tour[(j + 1) % n]);
                if d(a, c) + d(b, e) < d(a, b) + d(c, e) {
                    tour[i + 1..=j].reverse();
                    continue 'scan;
                }
            }
        }
        return;
    }
}

/// Multi-start nearest neighbor, each start refined by 2-opt. The shortest
/// tour wins with the lowest start city breaking ties.
pub fn baseline_tsp(p: &TspPayload, budget: Duration) -> Solution {
    let n = p.n();
    if n == 0 {
        return Solution {
            answer: CandidateAnswer::Route(Vec::new()),
            value: 0,
        };
    }
    let deadline = Instant::now() + budget;
    let starts = if n <= ALL_STARTS_LIMIT { n } else { ALL_STARTS_LIMIT };
    let mut best: Option<(u64, Vec<usize>)> = None;
    for start in 0..starts {
        let mut tour = nearest_neighbor(p, start);
        two_opt(p, &mut tour, Some(deadline));
        let len = p.tour_length(&tour);
        if best.as_ref().is_none_or(|(b, _)| len < *b) {
            best = Some((len, tour));
        }
        if Instant::now() >= deadline {
            break;
        }
    }
    let (value, mut tour) = best.unwrap();
    tour.push(tour[0]);
    Solution {
        answer: CandidateAnswer::Route(tour),
        value,
    }
}

/// Grows a cycle from a triangle by inserting outside vertices adjacent
/// to both ends of some cycle edge, from every start vertex.
pub fn expand_cycle(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    for start in 0..n {
        let nbrs = g.neighbors(start);
        let triangle = nbrs.iter().enumerate().find_map(|(i, &u)| {
            nbrs[i + 1..].iter().find(|&&w| g.has_edge(u, w)).map(|&w| (u, w))
        });
        let Some((u, w)) = triangle else { continue };
        let mut cycle = vec![start, u, w];
        let mut used = vec![false; n];
        for &v in &cycle {
            used[v] = true;
        }
        'grow: loop {
            for i in 0..cycle.len() {
                let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                if let Some(&x) = g.neighbors(a).iter().find(|&&x| !used[x] && g.has_edge(x, b)) {
                    cycle.insert(i + 1, x);
                    used[x] = true;
                    continue 'grow;
                }
            }
            break;
        }
        if cycle.len() > best.len() {
            best = cycle;
        }
        if best.len() == n {
            break;
        }
    }
    best
}

pub fn baseline_hamiltonian(p: &HamiltonianPayload, planted: Option<&Solution>) -> Solution {
    if let Some(s) = planted {
        if s.value == p.graph.n() as u64 {
            return s.clone();
        }
    }
    let cycle = expand_cycle(&p.graph);
    let value = cycle.len() as u64;
    match planted {
        Some(s) if s.value >= value => s.clone(),
        _ => Solution {
            answer: CandidateAnswer::VertexList(cycle),
            value,
        },
    }
}
