//! Balanced minimum bisection on weighted graphs with planted communities.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Generated, Solution};
use crate::answer::{CandidateAnswer, Checker, VerifyOutcome};
use crate::graph::WeightedGraph;
use crate::rng::Stream;
use crate::task::Difficulty;

const INTRA_PROBABILITY: f64 = 0.6;
const INTRA_WEIGHT: (u64, u64) = (5, 10);
const INTER_WEIGHT: (u64, u64) = (1, 4);
const CORE_WEIGHT: (u64, u64) = (8, 10);
/// Random balanced starts the baseline tries besides the planted split.
pub const RANDOM_STARTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionParams {
    pub target_vertices: usize,
    pub noise: f64,
    /// Fraction of each community densified into a complete core; zero
    /// disables reinforcement.
    pub core_fraction: f64,
    /// Traitor fraction range; `None` means no traitors.
    pub traitors: Option<(f64, f64)>,
}

impl BisectionParams {
    pub fn for_tier(d: Difficulty) -> Self {
        d.pick([
            BisectionParams {
                target_vertices: 30,
                noise: 0.1,
                core_fraction: 0.0,
                traitors: None,
            },
            BisectionParams {
                target_vertices: 42,
                noise: 0.15,
                core_fraction: 0.0,
                traitors: None,
            },
            BisectionParams {
                target_vertices: 45,
                noise: 0.1,
                core_fraction: 0.3,
                traitors: Some((0.05, 0.10)),
            },
            BisectionParams {
                target_vertices: 50,
                noise: 0.02,
                core_fraction: 0.5,
                traitors: Some((0.05, 0.10)),
            },
        ])
    }

    /// Vertex-count range: target within 10%.
    pub fn vertex_range(&self) -> (usize, usize) {
        let t = self.target_vertices as f64;
        ((t * 0.9).ceil() as usize, (t * 1.1).floor() as usize)
    }
}

/// Community graph on exactly `n` vertices, returning it with the
/// planted side of every vertex.
pub fn community_graph(n: usize, params: &BisectionParams, rng: &mut Stream) -> (WeightedGraph, Vec<bool>) {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut side = vec![false; n];
    for &v in &perm[..n.div_ceil(2)] {
        side[v] = true;
    }
    let mut g = WeightedGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if side[u] == side[v] {
                if rng.gen_bool(INTRA_PROBABILITY) {
                    g.set_weight(u, v, rng.gen_range(INTRA_WEIGHT.0..=INTRA_WEIGHT.1));
                }
            } else if rng.gen_bool(params.noise) {
                g.set_weight(u, v, rng.gen_range(INTER_WEIGHT.0..=INTER_WEIGHT.1));
            }
        }
    }

    if params.core_fraction > 0.0 {
        for community in [true, false] {
            let members: Vec<usize> = perm.iter().copied().filter(|&v| side[v] == community).collect();
            let core_size = ((members.len() as f64) * params.core_fraction).round() as usize;
            let core: Vec<usize> = members.choose_multiple(rng, core_size).copied().collect();
            for (i, &u) in core.iter().enumerate() {
                for &v in &core[i + 1..] {
                    g.set_weight(u, v, rng.gen_range(CORE_WEIGHT.0..=CORE_WEIGHT.1));
                }
            }
        }
    }

    if let Some((lo, hi)) = params.traitors {
        let count = ((n as f64) * rng.gen_range(lo..=hi)).round().max(1.0) as usize;
        let traitors: Vec<usize> = perm.choose_multiple(rng, count).copied().collect();
        for t in traitors {
            make_traitor(&mut g, &side, t, rng);
        }
    }
    (g, side)
}

/// Rewires `t` until it has more neighbors across the planted cut than
/// inside its own community.
fn make_traitor(g: &mut WeightedGraph, side: &[bool], t: usize, rng: &mut Stream) {
    loop {
        let (intra, inter): (Vec<usize>, Vec<usize>) =
            g.neighbors(t).map(|(u, _)| u).partition(|&u| side[u] == side[t]);
        if inter.len() > intra.len() {
            return;
        }
        let candidates: Vec<usize> = (0..g.n())
            .filter(|&u| side[u] != side[t] && g.weight(t, u) == 0)
            .collect();
        if !intra.is_empty() && (candidates.is_empty() || rng.gen_bool(0.5)) {
            let &u = intra.choose(rng).unwrap();
            g.remove_edge(t, u);
        } else if let Some(&u) = candidates.choose(rng) {
            g.set_weight(t, u, rng.gen_range(INTER_WEIGHT.0..=INTER_WEIGHT.1));
        } else {
            return;
        }
    }
}

fn sides_to_answer(side: &[bool]) -> CandidateAnswer {
    let a = (0..side.len()).filter(|&v| side[v]).collect();
    let b = (0..side.len()).filter(|&v| !side[v]).collect();
    CandidateAnswer::PartitionPair(a, b)
}

pub fn generate_bisection(d: Difficulty, rng: &mut Stream) -> Generated<WeightedGraph> {
    let params = BisectionParams::for_tier(d);
    let (lo, hi) = params.vertex_range();
    let n = rng.gen_range(lo..=hi);
    let (g, side) = community_graph(n, &params, rng);
    let value = g.cut_weight(&side);
    Generated {
        payload: g,
        planted: Some(Solution {
            answer: sides_to_answer(&side),
            value,
        }),
    }
}

pub fn verify_bisection(g: &WeightedGraph, first: &[usize], second: &[usize]) -> VerifyOutcome {
    let n = g.n();
    let mut c = Checker::new();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (part, list) in [first, second].into_iter().enumerate() {
        for &v in list {
            if v >= n {
                c.fail("out-of-range", format!("vertex {v} does not exist"));
                continue;
            }
            match owner[v] {
                Some(p) if p == part => c.fail("duplicate", format!("vertex {v} repeated in part {part}")),
                Some(_) => c.fail("not-disjoint", format!("vertex {v} appears in both parts")),
                None => owner[v] = Some(part),
            }
        }
    }
    let missing: Vec<usize> = (0..n).filter(|&v| owner[v].is_none()).collect();
    if !missing.is_empty() {
        c.fail("not-covering", format!("vertices {missing:?} are in neither part"));
    }
    if first.len().abs_diff(second.len()) > 1 {
        c.fail(
            "unbalanced",
            format!("part sizes {} and {} differ by more than one", first.len(), second.len()),
        );
    }
    c.finish(|| {
        let side: Vec<bool> = owner.iter().map(|o| *o == Some(0)).collect();
        g.cut_weight(&side)
    })
}

/// One Kernighan–Lin refinement from `side`, preserving part sizes.
pub fn kernighan_lin(g: &WeightedGraph, mut side: Vec<bool>) -> Vec<bool> {
    let n = g.n();
    let w = |u: usize, v: usize| g.weight(u, v) as i64;
    loop {
        // D[v] = external - internal cost
        let mut d: Vec<i64> = (0..n)
            .map(|v| {
                g.neighbors(v)
                    .map(|(u, wt)| if side[u] != side[v] { wt as i64 } else { -(wt as i64) })
                    .sum()
            })
            .collect();
        let mut locked = vec![false; n];
        let steps = side.iter().filter(|&&s| s).count().min(side.iter().filter(|&&s| !s).count());
        let mut swaps = Vec::with_capacity(steps);
        let mut gains = Vec::with_capacity(steps);
        for _ in 0..steps {
            let mut best: Option<(i64, usize, usize)> = None;
            for a in (0..n).filter(|&a| side[a] && !locked[a]) {
                for b in (0..n).filter(|&b| !side[b] && !locked[b]) {
                    let gain = d[a] + d[b] - 2 * w(a, b);
                    if best.is_none_or(|(g0, _, _)| gain > g0) {
                        best = Some((gain, a, b));
                    }
                }
            }
            let Some((gain, a, b)) = best else { break };
            locked[a] = true;
            locked[b] = true;
            for x in (0..n).filter(|&x| !locked[x]) {
                if side[x] {
                    d[x] += 2 * w(x, a) - 2 * w(x, b);
                } else {
                    d[x] += 2 * w(x, b) - 2 * w(x, a);
                }
            }
            swaps.push((a, b));
            gains.push(gain);
        }
        let mut best_k = 0;
        let mut best_total = 0;
        let mut running = 0;
        for (k, g) in gains.iter().enumerate() {
            running += g;
            if running > best_total {
                best_total = running;
                best_k = k + 1;
            }
        }
        if best_total <= 0 {
            return side;
        }
        for &(a, b) in &swaps[..best_k] {
            side[a] = false;
            side[b] = true;
        }
    }
}

fn random_balanced(n: usize, rng: &mut Stream) -> Vec<bool> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut side = vec![false; n];
    for &v in &perm[..n.div_ceil(2)] {
        side[v] = true;
    }
    side
}

/// KL from the planted split (when given) and from `RANDOM_STARTS`
/// random balanced splits; the lowest cut wins, earliest start on ties.
pub fn baseline_bisection(g: &WeightedGraph, planted: Option<&Solution>, rng: &mut Stream) -> Solution {
    let n = g.n();
    let mut starts = Vec::new();
    if let Some(Solution {
        answer: CandidateAnswer::PartitionPair(a, _),
        ..
    }) = planted
    {
        let mut side = vec![false; n];
        for &v in a {
            side[v] = true;
        }
        starts.push(side);
    }
    for _ in 0..RANDOM_STARTS {
        starts.push(random_balanced(n, rng));
    }
    let best = starts
        .into_iter()
        .map(|s| {
            let refined = kernighan_lin(g, s);
            (g.cut_weight(&refined), refined)
        })
        .min_by_key(|(cut, _)| *cut)
        .expect("at least one start");
    Solution {
        answer: sides_to_answer(&best.1),
        value: best.0,
    }
}
