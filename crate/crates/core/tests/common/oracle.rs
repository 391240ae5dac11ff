use std::collections::{BTreeSet, HashSet};

use np_engine_core::{CandidateAnswer, Instance, Payload, TaskKind};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub feasible: bool,
    pub objective: Option<u64>,
}

const INFEASIBLE: Verdict = Verdict {
    feasible: false,
    objective: None,
};

fn ok(objective: u64) -> Verdict {
    Verdict {
        feasible: true,
        objective: Some(objective),
    }
}

/// `{"0": a, "1": b}` as `[a, b]`.
pub fn keyed(v: &Value) -> Vec<&Value> {
    let map = v.as_object().expect("keyed map");
    (0..map.len()).map(|i| &map[&i.to_string()]).collect()
}

pub fn num(v: &Value) -> u64 {
    v.as_u64().expect("integer")
}

pub fn nums(v: &Value) -> Vec<u64> {
    v.as_array().expect("array").iter().map(num).collect()
}

pub fn wire(payload: &Payload) -> Value {
    serde_json::to_value(payload).unwrap()
}

/// Edge set of an `{"n", "adjacency"}` payload.
pub fn edges(p: &Value) -> (usize, HashSet<(u64, u64)>) {
    let n = num(&p["n"]) as usize;
    let mut set = HashSet::new();
    for (u, row) in keyed(&p["adjacency"]).into_iter().enumerate() {
        for v in nums(row) {
            set.insert((u as u64, v));
        }
    }
    (n, set)
}

fn distinct_in_range(ids: &[usize], n: usize) -> bool {
    ids.iter().all(|&i| i < n) && ids.iter().collect::<BTreeSet<_>>().len() == ids.len()
}

fn clock(t: u64) -> Option<u64> {
    let (h, m) = (t / 100, t % 100);
    (m < 60 && (h < 24 || (h == 24 && m == 0))).then_some(h * 60 + m)
}

pub fn check_instance(inst: &Instance, answer: &CandidateAnswer) -> Verdict {
    check(inst.task, &wire(&inst.payload), answer)
}

pub fn check(task: TaskKind, p: &Value, answer: &CandidateAnswer) -> Verdict {
    use CandidateAnswer as A;
    match (task, answer) {
        (TaskKind::MaxClique, A::VertexList(vs)) | (TaskKind::MaxIndependentSet, A::VertexList(vs)) => {
            let (n, e) = edges(p);
            if !distinct_in_range(vs, n) {
                return INFEASIBLE;
            }
            let want_edge = task == TaskKind::MaxClique;
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    if e.contains(&(a as u64, b as u64)) != want_edge {
                        return INFEASIBLE;
                    }
                }
            }
            ok(vs.len() as u64)
        }
        (TaskKind::GraphColoring, A::ColorAssignment(cs)) => {
            let (n, e) = edges(p);
            if cs.len() != n || cs.contains(&0) {
                return INFEASIBLE;
            }
            if e.iter().any(|&(a, b)| cs[a as usize] == cs[b as usize]) {
                return INFEASIBLE;
            }
            ok(cs.iter().collect::<BTreeSet<_>>().len() as u64)
        }
        (TaskKind::MeetingScheduling, A::Schedule(entries)) => {
            let meetings: Vec<(Vec<u64>, u64)> = keyed(&p["meetings"])
                .into_iter()
                .map(|m| (nums(&m[0]), num(&m[1])))
                .collect();
            let avail: Vec<Vec<(u64, u64)>> = keyed(&p["availability"])
                .into_iter()
                .map(|a| {
                    a.as_array()
                        .unwrap()
                        .iter()
                        .map(|iv| (clock(num(&iv[0])).unwrap(), clock(num(&iv[1])).unwrap()))
                        .collect()
                })
                .collect();
            let rooms: Vec<u64> = keyed(&p["rooms"]).into_iter().map(num).collect();
            if entries.windows(2).any(|w| w[0].start > w[1].start) {
                return INFEASIBLE;
            }
            let ids: Vec<usize> = entries.iter().map(|e| e.meeting).collect();
            if !distinct_in_range(&ids, meetings.len()) || entries.iter().any(|e| e.room >= rooms.len()) {
                return INFEASIBLE;
            }
            let mut spans = Vec::new();
            for e in entries {
                let Some(s) = clock(e.start as u64) else {
                    return INFEASIBLE;
                };
                let (people, dur) = &meetings[e.meeting];
                let end = s + dur;
                for &a in people {
                    if !avail[a as usize].iter().any(|&(lo, hi)| lo <= s && end <= hi) {
                        return INFEASIBLE;
                    }
                }
                if rooms[e.room] < people.len() as u64 {
                    return INFEASIBLE;
                }
                spans.push((e.meeting, e.room, s, end));
            }
            for (i, a) in spans.iter().enumerate() {
                for b in &spans[i + 1..] {
                    let overlap = a.2 < b.3 && b.2 < a.3;
                    if !overlap {
                        continue;
                    }
                    let shared = meetings[a.0].0.iter().any(|x| meetings[b.0].0.contains(x));
                    if a.1 == b.1 || shared {
                        return INFEASIBLE;
                    }
                }
            }
            ok(entries.iter().map(|e| meetings[e.meeting].0.len() as u64).sum())
        }
        (TaskKind::BalancedBisection, A::PartitionPair(a, b)) => {
            let n = num(&p["n"]) as usize;
            let all: Vec<usize> = a.iter().chain(b).copied().collect();
            if all.len() != n || !distinct_in_range(&all, n) || a.len().abs_diff(b.len()) > 1 {
                return INFEASIBLE;
            }
            let left: HashSet<usize> = a.iter().copied().collect();
            let mut cut = 0;
            for (u, row) in keyed(&p["weights"]).into_iter().enumerate() {
                for (v, w) in row.as_object().unwrap() {
                    let v: usize = v.parse().unwrap();
                    if u < v && left.contains(&u) != left.contains(&v) {
                        cut += num(w);
                    }
                }
            }
            ok(cut)
        }
        (TaskKind::SubsetSum, A::IndexList(ix)) => {
            let numbers: Vec<u64> = keyed(&p["numbers"]).into_iter().map(num).collect();
            if !distinct_in_range(ix, numbers.len()) {
                return INFEASIBLE;
            }
            if ix.iter().map(|&i| numbers[i]).sum::<u64>() != num(&p["target"]) {
                return INFEASIBLE;
            }
            ok(ix.len() as u64)
        }
        (TaskKind::SetCover, answer) => {
            let u = num(&p["universe_size"]) as usize;
            let subsets: Vec<Vec<u64>> = keyed(&p["subsets"]).into_iter().map(nums).collect();
            let union = |ids: &mut dyn Iterator<Item = usize>| {
                ids.flat_map(|i| subsets[i].iter().copied()).collect::<BTreeSet<u64>>().len() == u
            };
            match answer {
                A::Impossible if union(&mut (0..subsets.len())) => INFEASIBLE,
                A::Impossible => ok(0),
                A::IndexList(ix) if distinct_in_range(ix, subsets.len()) && union(&mut ix.iter().copied()) => {
                    ok(ix.len() as u64)
                }
                _ => INFEASIBLE,
            }
        }
        (TaskKind::Knapsack, A::IndexList(ix)) => {
            let items: Vec<(u64, u64)> = keyed(&p["items"]).into_iter().map(|it| (num(&it[0]), num(&it[1]))).collect();
            if !distinct_in_range(ix, items.len()) {
                return INFEASIBLE;
            }
            if ix.iter().map(|&i| items[i].0).sum::<u64>() > num(&p["capacity"]) {
                return INFEASIBLE;
            }
            ok(ix.iter().map(|&i| items[i].1).sum())
        }
        (TaskKind::Tsp, A::Route(r)) => {
            let n = num(&p["n"]) as usize;
            if r.len() != n + 1 || r[0] != r[n] || !distinct_in_range(&r[..n], n) {
                return INFEASIBLE;
            }
            let d = distance_matrix(p);
            ok(r.windows(2).map(|w| d[w[0]][w[1]]).sum())
        }
        (TaskKind::HamiltonianCycle, A::VertexList(c)) => {
            let (n, e) = edges(p);
            if c.len() < 3 || !distinct_in_range(c, n) {
                return INFEASIBLE;
            }
            let closed = (0..c.len()).all(|i| e.contains(&(c[i] as u64, c[(i + 1) % c.len()] as u64)));
            if closed {
                ok(c.len() as u64)
            } else {
                INFEASIBLE
            }
        }
        _ => INFEASIBLE,
    }
}

pub fn distance_matrix(p: &Value) -> Vec<Vec<u64>> {
    let n = num(&p["n"]) as usize;
    let mut d = vec![vec![0; n]; n];
    for (a, row) in keyed(&p["distances"]).into_iter().enumerate() {
        for (b, w) in row.as_object().unwrap() {
            d[a][b.parse::<usize>().unwrap()] = num(w);
        }
    }
    d
}
