//! Subset sum (maximum cardinality), set cover and 0/1 knapsack.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Generated, Solution};
use crate::answer::{CandidateAnswer, Checker, VerifyOutcome};
use crate::error::{EngineError, Result};
use crate::rng::Stream;
use crate::task::Difficulty;

/// Knapsack capacities up to this bound are solved exactly by DP.
pub const KNAPSACK_DP_LIMIT: u64 = 100_000;
pub const SUBSET_SIZE_FACTOR: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSubsetSum")]
pub struct SubsetSumPayload {
    pub target: u64,
    #[serde(with = "crate::keyed")]
    pub numbers: Vec<u64>,
}

#[derive(Deserialize)]
struct RawSubsetSum {
    target: u64,
    #[serde(with = "crate::keyed")]
    numbers: Vec<u64>,
}

impl TryFrom<RawSubsetSum> for SubsetSumPayload {
    type Error = EngineError;

    fn try_from(raw: RawSubsetSum) -> Result<Self> {
        if raw.target == 0 || raw.numbers.contains(&0) {
            return Err(EngineError::payload("subset_sum", "target and numbers must be positive"));
        }
        Ok(SubsetSumPayload {
            target: raw.target,
            numbers: raw.numbers,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSetCover")]
pub struct SetCoverPayload {
    pub universe_size: usize,
    /// Sorted, duplicate-free element lists.
    #[serde(with = "crate::keyed")]
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawSetCover {
    universe_size: usize,
    #[serde(with = "crate::keyed")]
    subsets: Vec<Vec<usize>>,
}

impl TryFrom<RawSetCover> for SetCoverPayload {
    type Error = EngineError;

    fn try_from(raw: RawSetCover) -> Result<Self> {
        let mut subsets = raw.subsets;
        for (i, s) in subsets.iter_mut().enumerate() {
            if s.iter().any(|&e| e >= raw.universe_size) {
                return Err(EngineError::payload("set_cover", format!("subset {i} leaves the universe")));
            }
            s.sort_unstable();
            s.dedup();
        }
        Ok(SetCoverPayload {
            universe_size: raw.universe_size,
            subsets,
        })
    }
}

impl SetCoverPayload {
    pub fn coverable(&self) -> bool {
        let mut covered = vec![false; self.universe_size];
        for &e in self.subsets.iter().flatten() {
            covered[e] = true;
        }
        covered.into_iter().all(|c| c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(u64, u64)", into = "(u64, u64)")]
pub struct Item {
    pub weight: u64,
    pub value: u64,
}

impl From<(u64, u64)> for Item {
    fn from((weight, value): (u64, u64)) -> Self {
        Item { weight, value }
    }
}

impl From<Item> for (u64, u64) {
    fn from(i: Item) -> Self {
        (i.weight, i.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKnapsack")]
pub struct KnapsackPayload {
    pub capacity: u64,
    #[serde(with = "crate::keyed")]
    pub items: Vec<Item>,
}

#[derive(Deserialize)]
struct RawKnapsack {
    capacity: u64,
    #[serde(with = "crate::keyed")]
    items: Vec<Item>,
}

impl TryFrom<RawKnapsack> for KnapsackPayload {
    type Error = EngineError;

    fn try_from(raw: RawKnapsack) -> Result<Self> {
        if raw.capacity == 0 || raw.items.iter().any(|i| i.weight == 0 || i.value == 0) {
            return Err(EngineError::payload("knapsack", "capacity, weights and values must be positive"));
        }
        Ok(KnapsackPayload {
            capacity: raw.capacity,
            items: raw.items,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetSumParams {
    pub count: (usize, usize),
    pub planted: (usize, usize),
    pub values: (u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetCoverParams {
    pub universe: (usize, usize),
    pub subsets: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnapsackParams {
    pub planted: (usize, usize),
    pub total: (usize, usize),
    pub weights: (u64, u64),
    pub ratio: (f64, f64),
    pub capacity_multiplier: (f64, f64),
}

impl SubsetSumParams {
    pub fn for_tier(d: Difficulty) -> Self {
        let (count, planted, values) = d.pick([
            ((5, 10), (4, 8), (1, 5)),
            ((8, 12), (4, 8), (1, 10)),
            ((12, 15), (8, 12), (1, 15)),
            ((15, 20), (10, 15), (1, 15)),
        ]);
        SubsetSumParams { count, planted, values }
    }
}

impl SetCoverParams {
    pub fn for_tier(d: Difficulty) -> Self {
        let (universe, subsets) = d.pick([((10, 20), (5, 10)), ((20, 25), (10, 15)), ((25, 30), (15, 25)), ((30, 40), (20, 30))]);
        SetCoverParams { universe, subsets }
    }
}

impl KnapsackParams {
    pub fn for_tier(d: Difficulty) -> Self {
        d.pick([
            KnapsackParams {
                planted: (6, 10),
                total: (15, 25),
                weights: (5, 25),
                ratio: (1.8, 2.5),
                capacity_multiplier: (1.1, 1.4),
            },
            KnapsackParams {
                planted: (8, 12),
                total: (25, 35),
                weights: (20, 80),
                ratio: (1.5, 2.0),
                capacity_multiplier: (1.05, 1.25),
            },
            KnapsackParams {
                planted: (15, 25),
                total: (35, 60),
                weights: (50, 200),
                ratio: (1.2, 1.6),
                capacity_multiplier: (1.02, 1.15),
            },
            KnapsackParams {
                planted: (25, 35),
                total: (55, 80),
                weights: (50, 200),
                ratio: (1.2, 1.6),
                capacity_multiplier: (1.02, 1.15),
            },
        ])
    }
}

/// Scatters `planted` and `distractors` over shuffled positions, returning
/// the combined list and the sorted positions of the planted entries.
fn scatter<T: Copy>(planted: &[T], distractors: &[T], rng: &mut Stream) -> (Vec<T>, Vec<usize>) {
    let mut tagged: Vec<(bool, T)> = planted
        .iter()
        .map(|&x| (true, x))
        .chain(distractors.iter().map(|&x| (false, x)))
        .collect();
    tagged.shuffle(rng);
    let positions = tagged.iter().enumerate().filter(|(_, (p, _))| *p).map(|(i, _)| i).collect();
    (tagged.into_iter().map(|(_, x)| x).collect(), positions)
}

pub fn generate_subset_sum(d: Difficulty, rng: &mut Stream) -> Generated<SubsetSumPayload> {
    let params = SubsetSumParams::for_tier(d);
    let count = rng.gen_range(params.count.0..=params.count.1);
    let size = rng.gen_range(params.planted.0.min(count)..=params.planted.1.min(count));
    let (lo, hi) = params.values;
    let planted: Vec<u64> = (0..size).map(|_| rng.gen_range(lo..=hi)).collect();
    let target: u64 = planted.iter().sum();
    let distractors: Vec<u64> = (size..count)
        .map(|_| loop {
            let x = rng.gen_range(lo..=hi);
            if x != target {
                break x;
            }
        })
        .collect();
    let (numbers, positions) = scatter(&planted, &distractors, rng);
    Generated {
        payload: SubsetSumPayload { target, numbers },
        planted: Some(Solution {
            answer: CandidateAnswer::IndexList(positions),
            value: size as u64,
        }),
    }
}

pub fn generate_set_cover(d: Difficulty, rng: &mut Stream) -> Generated<SetCoverPayload> {
    let params = SetCoverParams::for_tier(d);
    let universe_size = rng.gen_range(params.universe.0..=params.universe.1);
    let count = rng.gen_range(params.subsets.0..=params.subsets.1);
    let size = ((universe_size as f64) * SUBSET_SIZE_FACTOR).round().max(1.0) as usize;
    let mut subsets: Vec<Vec<usize>> = (0..count)
        .map(|_| (0..universe_size).choose_multiple(rng, size))
        .collect();
    let mut covered = vec![false; universe_size];
    for &e in subsets.iter().flatten() {
        covered[e] = true;
    }
    for e in (0..universe_size).filter(|&e| !covered[e]) {
        let target = rng.gen_range(0..count);
        subsets[target].push(e);
    }
    for s in &mut subsets {
        s.sort_unstable();
    }
    Generated {
        payload: SetCoverPayload {
            universe_size,
            subsets,
        },
        planted: None,
    }
}

pub fn generate_knapsack(d: Difficulty, rng: &mut Stream) -> Generated<KnapsackPayload> {
    let params = KnapsackParams::for_tier(d);
    let planted_count = rng.gen_range(params.planted.0..=params.planted.1);
    let total = rng.gen_range(params.total.0.max(planted_count + 1)..=params.total.1.max(planted_count + 1));
    let (wlo, whi) = params.weights;
    let planted: Vec<Item> = (0..planted_count)
        .map(|_| {
            let weight = rng.gen_range(wlo..=whi);
            let ratio = rng.gen_range(params.ratio.0..=params.ratio.1);
            Item {
                weight,
                value: ((weight as f64) * ratio).round().max(1.0) as u64,
            }
        })
        .collect();
    // lowest value/weight among planted items, compared exactly by cross-multiplication
    let worst = *planted
        .iter()
        .min_by(|a, b| (a.value * b.weight).cmp(&(b.value * a.weight)))
        .expect("at least one planted item");
    let distractors: Vec<Item> = (planted_count..total)
        .map(|_| {
            let weight = rng.gen_range(wlo..=whi);
            let ratio = rng.gen_range(params.ratio.0 * 0.6..params.ratio.0);
            let mut value = ((weight as f64) * ratio).floor().max(1.0) as u64;
            while value > 1 && value * worst.weight >= worst.value * weight {
                value -= 1;
            }
            Item { weight, value }
        })
        .collect();
    let planted_weight: u64 = planted.iter().map(|i| i.weight).sum();
    let planted_value: u64 = planted.iter().map(|i| i.value).sum();
    let multiplier = rng.gen_range(params.capacity_multiplier.0..=params.capacity_multiplier.1);
    let capacity = ((planted_weight as f64) * multiplier).floor() as u64;
    let (items, positions) = scatter(&planted, &distractors, rng);
    Generated {
        payload: KnapsackPayload { capacity, items },
        planted: Some(Solution {
            answer: CandidateAnswer::IndexList(positions),
            value: planted_value,
        }),
    }
}

pub fn verify_subset_sum(p: &SubsetSumPayload, answer: &[usize]) -> VerifyOutcome {
    let mut c = Checker::new();
    if c.ids(answer, p.numbers.len(), "index") {
        let sum: u64 = answer.iter().map(|&i| p.numbers[i]).sum();
        if sum != p.target {
            c.fail("wrong-sum", format!("selected numbers sum to {sum}, target is {}", p.target));
        }
    }
    c.finish(|| answer.len() as u64)
}

pub fn verify_set_cover(p: &SetCoverPayload, answer: &CandidateAnswer) -> VerifyOutcome {
    let mut c = Checker::new();
    match answer {
        CandidateAnswer::Impossible => {
            if p.coverable() {
                c.fail("cover-exists", "the subsets cover the universe, so a cover exists");
            }
            c.finish(|| 0)
        }
        CandidateAnswer::IndexList(chosen) => {
            if c.ids(chosen, p.subsets.len(), "subset") {
                let mut covered = vec![false; p.universe_size];
                for &i in chosen {
                    for &e in &p.subsets[i] {
                        covered[e] = true;
                    }
                }
                let missing: Vec<usize> = (0..p.universe_size).filter(|&e| !covered[e]).collect();
                if !missing.is_empty() {
                    c.fail("uncovered", format!("elements {missing:?} are not covered"));
                }
            }
            c.finish(|| chosen.len() as u64)
        }
        other => crate::answer::wrong_kind(crate::task::Grammar::IndexList, other),
    }
}

pub fn verify_knapsack(p: &KnapsackPayload, answer: &[usize]) -> VerifyOutcome {
    let mut c = Checker::new();
    if c.ids(answer, p.items.len(), "item") {
        let weight: u64 = answer.iter().map(|&i| p.items[i].weight).sum();
        if weight > p.capacity {
            c.fail(
                "over-capacity",
                format!("total weight {weight} exceeds capacity {}", p.capacity),
            );
        }
    }
    c.finish(|| answer.iter().map(|&i| p.items[i].value).sum())
}

/// Exact DP over reachable sums maximizing the number of elements.
/// Returns `None` when no subset reaches the target.
pub fn max_cardinality_subset(p: &SubsetSumPayload) -> Option<Vec<usize>> {
    let t = p.target as usize;
    let n = p.numbers.len();
    // best[i][s]: most elements from the first i numbers summing to s
    let mut best = vec![vec![None::<usize>; t + 1]; n + 1];
    best[0][0] = Some(0);
    for i in 0..n {
        let x = p.numbers[i] as usize;
        for s in 0..=t {
            let skip = best[i][s];
            let take = if s >= x { best[i][s - x].map(|c| c + 1) } else { None };
            best[i + 1][s] = skip.max(take);
        }
    }
    let mut count = best[n][t]?;
    let mut s = t;
    let mut chosen = Vec::with_capacity(count);
    for i in (0..n).rev() {
        let x = p.numbers[i] as usize;
        if best[i][s] == Some(count) {
            continue;
        }
        chosen.push(i);
        s -= x;
        count -= 1;
    }
    chosen.reverse();
    Some(chosen)
}

pub fn baseline_subset_sum(p: &SubsetSumPayload, planted: Option<&Solution>) -> Solution {
    match max_cardinality_subset(p) {
        Some(chosen) => Solution {
            value: chosen.len() as u64,
            answer: CandidateAnswer::IndexList(chosen),
        },
        None => planted.cloned().unwrap_or(Solution {
            answer: CandidateAnswer::IndexList(Vec::new()),
            value: 0,
        }),
    }
}

/// Greedy set cover: repeatedly take the subset covering the most
/// uncovered elements, lowest index on ties.
pub fn baseline_set_cover(p: &SetCoverPayload) -> Solution {
    if !p.coverable() {
        return Solution {
            answer: CandidateAnswer::Impossible,
            value: 0,
        };
    }
    let mut covered = vec![false; p.universe_size];
    let mut remaining = p.universe_size;
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (best, gain) = p
            .subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.iter().filter(|&&e| !covered[e]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        debug_assert!(gain > 0);
        for &e in &p.subsets[best] {
            if !covered[e] {
                covered[e] = true;
                remaining -= 1;
            }
        }
        chosen.push(best);
    }
    Solution {
        value: chosen.len() as u64,
        answer: CandidateAnswer::IndexList(chosen),
    }
}

/// Exact 0/1 knapsack by DP over capacity.
pub fn knapsack_dp(p: &KnapsackPayload) -> Vec<usize> {
    let cap = p.capacity as usize;
    let n = p.items.len();
    let mut table = vec![vec![0u64; cap + 1]; n + 1];
    for i in 0..n {
        let Item { weight, value } = p.items[i];
        let w = weight as usize;
        for c in 0..=cap {
            let skip = table[i][c];
            table[i + 1][c] = if c >= w { skip.max(table[i][c - w] + value) } else { skip };
        }
    }
    let mut c = cap;
    let mut chosen = Vec::new();
    for i in (0..n).rev() {
        if table[i + 1][c] != table[i][c] {
            chosen.push(i);
            c -= p.items[i].weight as usize;
        }
    }
    chosen.reverse();
    chosen
}

/// Density-ordered greedy fill followed by single add/swap improvements;
/// used when capacity is too large for the DP table.
pub fn knapsack_greedy(p: &KnapsackPayload) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.items.len()).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (p.items[a], p.items[b]);
        (ib.value * ia.weight).cmp(&(ia.value * ib.weight)).then(a.cmp(&b))
    });
    let mut taken = vec![false; p.items.len()];
    let mut weight = 0;
    for &i in &order {
        if weight + p.items[i].weight <= p.capacity {
            taken[i] = true;
            weight += p.items[i].weight;
        }
    }
    loop {
        let mut best: Option<(u64, usize, Option<usize>)> = None;
        for i in (0..p.items.len()).filter(|&i| !taken[i]) {
            let add = p.items[i];
            if weight + add.weight <= p.capacity {
                let gain = add.value;
                if best.is_none_or(|(g, ..)| gain > g) {
                    best = Some((gain, i, None));
                }
            }
            for j in (0..p.items.len()).filter(|&j| taken[j]) {
                let out = p.items[j];
                if weight - out.weight + add.weight <= p.capacity && add.value > out.value {
                    let gain = add.value - out.value;
                    if best.is_none_or(|(g, ..)| gain > g) {
                        best = Some((gain, i, Some(j)));
                    }
                }
            }
        }
        match best {
            Some((_, i, out)) => {
                taken[i] = true;
                weight += p.items[i].weight;
                if let Some(j) = out {
                    taken[j] = false;
                    weight -= p.items[j].weight;
                }
            }
            None => break,
        }
    }
    (0..p.items.len()).filter(|&i| taken[i]).collect()
}

pub fn baseline_knapsack(p: &KnapsackPayload, planted: Option<&Solution>) -> Solution {
    let chosen = if p.capacity <= KNAPSACK_DP_LIMIT {
        knapsack_dp(p)
    } else {
        knapsack_greedy(p)
    };
    let value = chosen.iter().map(|&i| p.items[i].value).sum();
    match planted {
        Some(s) if s.value > value => s.clone(),
        _ => Solution {
            answer: CandidateAnswer::IndexList(chosen),
            value,
        },
    }
}
