//! Maximum clique, maximum independent set and graph coloring.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{clique_search, Generated, Solution};
use crate::answer::{CandidateAnswer, Checker, VerifyOutcome};
use crate::graph::UndirectedGraph;
use crate::rng::Stream;
use crate::task::Difficulty;

const CLIQUE_VERTICES: [(usize, usize); 4] = [(4, 8), (8, 12), (12, 16), (16, 20)];
const CLIQUE_PLANT: [(usize, usize); 4] = [(2, 4), (2, 4), (2, 6), (4, 8)];
const CLIQUE_BACKGROUND: [f64; 4] = [0.25, 0.3, 0.3, 0.35];

const MIS_VERTICES: [(usize, usize); 4] = [(12, 20), (20, 30), (30, 40), (40, 50)];
const MIS_PLANT: [(usize, usize); 4] = [(4, 8), (8, 12), (12, 16), (16, 20)];
const MIS_BACKGROUND: [f64; 4] = [0.35, 0.4, 0.45, 0.5];

const COLORING_VERTICES: [(usize, usize); 4] = [(8, 12), (15, 22), (25, 32), (32, 40)];
const COLORING_COLORS: [(usize, usize); 4] = [(3, 4), (4, 6), (6, 8), (6, 8)];
const COLORING_DENSITY: [f64; 4] = [0.2, 0.35, 0.5, 0.5];

/// Clique sizes up to this vertex count are always certified exactly.
pub const EXACT_CLIQUE_LIMIT: usize = 20;
/// Independent sets up to this vertex count are certified exactly.
pub const EXACT_MIS_LIMIT: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringParams {
    pub vertices: (usize, usize),
    /// Planted clique/independent-set size, or color count for coloring.
    pub plant: (usize, usize),
    /// Background edge probability (coloring: between color classes).
    pub density: f64,
}

impl ClusteringParams {
    pub fn clique(d: Difficulty) -> Self {
        ClusteringParams {
            vertices: d.pick(CLIQUE_VERTICES),
            plant: d.pick(CLIQUE_PLANT),
            density: d.pick(CLIQUE_BACKGROUND),
        }
    }

    pub fn independent_set(d: Difficulty) -> Self {
        ClusteringParams {
            vertices: d.pick(MIS_VERTICES),
            plant: d.pick(MIS_PLANT),
            density: d.pick(MIS_BACKGROUND),
        }
    }

    pub fn coloring(d: Difficulty) -> Self {
        ClusteringParams {
            vertices: d.pick(COLORING_VERTICES),
            plant: d.pick(COLORING_COLORS),
            density: d.pick(COLORING_DENSITY),
        }
    }
}

fn sample_plant(rng: &mut Stream, params: &ClusteringParams) -> (usize, Vec<usize>, Vec<bool>) {
    let n = rng.gen_range(params.vertices.0..=params.vertices.1);
    let k = rng.gen_range(params.plant.0..=params.plant.1.min(n));
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut plant = perm[..k].to_vec();
    plant.sort_unstable();
    let mut in_plant = vec![false; n];
    for &v in &plant {
        in_plant[v] = true;
    }
    (n, plant, in_plant)
}

/// Plants a clique, adds background edges, then deletes edges from any
/// larger clique until the plant is a maximum clique.
pub fn generate_clique(d: Difficulty, rng: &mut Stream) -> Generated<UndirectedGraph> {
    let params = ClusteringParams::clique(d);
    let (n, plant, in_plant) = sample_plant(rng, &params);
    let mut g = UndirectedGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if (in_plant[u] && in_plant[v]) || rng.gen_bool(params.density) {
                g.add_edge(u, v);
            }
        }
    }
    loop {
        let best = clique_search::maximum_clique(&g);
        if best.len() <= plant.len() {
            break;
        }
        // A clique larger than the plant always has a pair touching a non-plant vertex.
        let pairs: Vec<(usize, usize)> = best
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| best[i + 1..].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| !(in_plant[u] && in_plant[v]))
            .collect();
        let &(u, v) = pairs.choose(rng).expect("larger clique leaves the plant");
        g.remove_edge(u, v);
    }
    let value = plant.len() as u64;
    Generated {
        payload: g,
        planted: Some(Solution {
            answer: CandidateAnswer::VertexList(plant),
            value,
        }),
    }
}

/// Plants an independent set, adds background edges, then adds edges
/// inside any larger independent set until the plant is maximum.
pub fn generate_independent_set(d: Difficulty, rng: &mut Stream) -> Generated<UndirectedGraph> {
    let params = ClusteringParams::independent_set(d);
    let (n, plant, in_plant) = sample_plant(rng, &params);
    let mut g = UndirectedGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if !(in_plant[u] && in_plant[v]) && rng.gen_bool(params.density) {
                g.add_edge(u, v);
            }
        }
    }
    loop {
        let best = clique_search::maximum_independent_set(&g);
        if best.len() <= plant.len() {
            break;
        }
        let outside: Vec<usize> = best.iter().copied().filter(|&v| !in_plant[v]).collect();
        let &x = outside.choose(rng).expect("larger set leaves the plant");
        let others: Vec<usize> = best.iter().copied().filter(|&v| v != x).collect();
        let &y = others.choose(rng).expect("set has at least two vertices");
        g.add_edge(x, y);
    }
    let value = plant.len() as u64;
    Generated {
        payload: g,
        planted: Some(Solution {
            answer: CandidateAnswer::VertexList(plant),
            value,
        }),
    }
}

/// Partitions vertices into `k` color classes with a rainbow `k`-clique
/// (one vertex per class), so the chromatic number is exactly `k`.
pub fn generate_coloring(d: Difficulty, rng: &mut Stream) -> Generated<UndirectedGraph> {
    let params = ClusteringParams::coloring(d);
    let n = rng.gen_range(params.vertices.0..=params.vertices.1);
    let k = rng.gen_range(params.plant.0..=params.plant.1.min(n));
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut class = vec![0usize; n];
    for (i, &v) in perm.iter().enumerate() {
        class[v] = if i < k { i } else { rng.gen_range(0..k) };
    }
    let mut g = UndirectedGraph::empty(n);
    for (i, &u) in perm[..k].iter().enumerate() {
        for &v in &perm[i + 1..k] {
            g.add_edge(u, v);
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if class[u] != class[v] && !g.has_edge(u, v) && rng.gen_bool(params.density) {
                g.add_edge(u, v);
            }
        }
    }
    Generated {
        payload: g,
        planted: Some(Solution {
            answer: CandidateAnswer::ColorAssignment(class.iter().map(|c| c + 1).collect()),
            value: k as u64,
        }),
    }
}

pub fn verify_max_clique(g: &UndirectedGraph, answer: &[usize]) -> VerifyOutcome {
    let mut c = Checker::new();
    if c.ids(answer, g.n(), "vertex") {
        for (i, &u) in answer.iter().enumerate() {
            for &v in &answer[i + 1..] {
                if !g.has_edge(u, v) {
                    c.fail("not-adjacent", format!("vertices {u} and {v} are not adjacent"));
                }
            }
        }
    }
    c.finish(|| answer.len() as u64)
}

pub fn verify_max_independent_set(g: &UndirectedGraph, answer: &[usize]) -> VerifyOutcome {
    let mut c = Checker::new();
    if c.ids(answer, g.n(), "vertex") {
        for (i, &u) in answer.iter().enumerate() {
            for &v in &answer[i + 1..] {
                if g.has_edge(u, v) {
                    c.fail("adjacent-pair", format!("vertices {u} and {v} are adjacent"));
                }
            }
        }
    }
    c.finish(|| answer.len() as u64)
}

pub fn verify_graph_coloring(g: &UndirectedGraph, colors: &[usize]) -> VerifyOutcome {
    let mut c = Checker::new();
    if colors.len() != g.n() {
        c.fail(
            "length-mismatch",
            format!("{} colors given for {} vertices", colors.len(), g.n()),
        );
        return c.finish(|| 0);
    }
    for (v, &col) in colors.iter().enumerate() {
        if col == 0 {
            c.fail("non-positive-color", format!("vertex {v} has color 0"));
        }
    }
    for (u, v) in g.edges() {
        if colors[u] == colors[v] {
            c.fail(
                "monochrome-edge",
                format!("adjacent vertices {u} and {v} share color {}", colors[u]),
            );
        }
    }
    c.finish(|| {
        let mut used = colors.to_vec();
        used.sort_unstable();
        used.dedup();
        used.len() as u64
    })
}

pub fn baseline_max_clique(g: &UndirectedGraph, planted: Option<&Solution>) -> Solution {
    if let Some(p) = planted {
        if g.n() > EXACT_CLIQUE_LIMIT {
            return p.clone();
        }
    }
    let exact = clique_search::maximum_clique(g);
    match planted {
        Some(p) if p.value >= exact.len() as u64 => p.clone(),
        _ => Solution {
            value: exact.len() as u64,
            answer: CandidateAnswer::VertexList(exact),
        },
    }
}

pub fn baseline_max_independent_set(g: &UndirectedGraph, planted: Option<&Solution>) -> Solution {
    let found = if g.n() <= EXACT_MIS_LIMIT {
        clique_search::maximum_independent_set(g)
    } else {
        greedy_independent_set(g)
    };
    match planted {
        Some(p) if p.value >= found.len() as u64 => p.clone(),
        _ => Solution {
            value: found.len() as u64,
            answer: CandidateAnswer::VertexList(found),
        },
    }
}

fn greedy_independent_set(g: &UndirectedGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut blocked = vec![false; g.n()];
    let mut set = Vec::new();
    for v in order {
        if !blocked[v] {
            set.push(v);
            blocked[v] = true;
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    set.sort_unstable();
    set
}

pub fn baseline_graph_coloring(g: &UndirectedGraph, planted: Option<&Solution>) -> Solution {
    let colors = dsatur(g);
    let used = colors.iter().max().copied().unwrap_or(0) as u64;
    match planted {
        Some(p) if p.value <= used => p.clone(),
        _ => Solution {
            answer: CandidateAnswer::ColorAssignment(colors),
            value: used,
        },
    }
}

/// DSatur greedy coloring with colors starting at 1.
pub fn dsatur(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n();
    let mut colors = vec![0usize; n];
    let mut neighbor_colors: Vec<Vec<bool>> = vec![vec![false; n + 2]; n];
    let mut saturation = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == 0)
            .max_by_key(|&v| (saturation[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("uncolored vertex remains");
        let color = (1..).find(|&c| !neighbor_colors[v][c]).unwrap();
        colors[v] = color;
        for &u in g.neighbors(v) {
            if !neighbor_colors[u][color] {
                neighbor_colors[u][color] = true;
                saturation[u] += 1;
            }
        }
    }
    colors
}
