//! Candidate answers for oracle comparisons: the reference answers plus
//! random legal-looking mutations of them.

use np_engine_core::{CandidateAnswer, Instance, ScheduleEntry};
use rand::seq::SliceRandom;
use rand::Rng;

fn payload_size(inst: &Instance) -> usize {
    let v = serde_json::to_value(&inst.payload).unwrap();
    for key in ["n", "universe_size"] {
        if let Some(n) = v.get(key).and_then(|x| x.as_u64()) {
            return n as usize;
        }
    }
    for key in ["numbers", "items", "meetings", "subsets"] {
        if let Some(m) = v.get(key).and_then(|x| x.as_object()) {
            return m.len();
        }
    }
    unreachable!("every payload has a size")
}

fn mutate_list(xs: &mut Vec<usize>, n: usize, rng: &mut impl Rng) {
    let bound = n + 1;
    match rng.gen_range(0..7) {
        0 if !xs.is_empty() => {
            let i = rng.gen_range(0..xs.len());
            xs.remove(i);
        }
        1 => {
            let at = rng.gen_range(0..=xs.len());
            xs.insert(at, rng.gen_range(0..bound));
        }
        2 if !xs.is_empty() => {
            let x = *xs.choose(rng).unwrap();
            xs.push(x);
        }
        3 if !xs.is_empty() => {
            let i = rng.gen_range(0..xs.len());
            xs[i] = rng.gen_range(0..bound);
        }
        4 if xs.len() >= 2 => {
            let i = rng.gen_range(0..xs.len());
            let j = rng.gen_range(0..xs.len());
            xs.swap(i, j);
        }
        5 => xs.truncate(rng.gen_range(0..=xs.len())),
        _ => {
            let i = rng.gen_range(0..=xs.len());
            let extra = rng.gen_range(0..n.max(1));
            xs.insert(i, extra);
        }
    }
}

fn mutate_colors(cs: &mut Vec<usize>, rng: &mut impl Rng) {
    if cs.is_empty() {
        cs.push(1);
        return;
    }
    let i = rng.gen_range(0..cs.len());
    match rng.gen_range(0..4) {
        0 => cs[i] = cs[rng.gen_range(0..cs.len())],
        1 => cs[i] = rng.gen_range(0..=cs.len()),
        2 => {
            cs.pop();
        }
        _ => {
            let j = rng.gen_range(0..cs.len());
            cs.swap(i, j);
        }
    }
}

fn mutate_pair(a: &mut Vec<usize>, b: &mut Vec<usize>, n: usize, rng: &mut impl Rng) {
    match rng.gen_range(0..4) {
        0 if !a.is_empty() && !b.is_empty() => {
            let i = rng.gen_range(0..a.len());
            let j = rng.gen_range(0..b.len());
            std::mem::swap(&mut a[i], &mut b[j]);
        }
        1 if !a.is_empty() => {
            let i = rng.gen_range(0..a.len());
            b.push(a.remove(i));
        }
        2 => a.push(rng.gen_range(0..n + 1)),
        _ => mutate_list(if rng.gen() { a } else { b }, n, rng),
    }
}

fn mutate_schedule(s: &mut Vec<ScheduleEntry>, meetings: usize, rooms: usize, rng: &mut impl Rng) {
    match rng.gen_range(0..6) {
        0 if !s.is_empty() => {
            let i = rng.gen_range(0..s.len());
            let shift: i64 = *[-60, -30, -15, -5, 5, 15, 30, 60].choose(rng).unwrap();
            let minutes = (s[i].start / 100 * 60 + s[i].start % 100) as i64 + shift;
            let minutes = minutes.clamp(0, 24 * 60) as u32;
            s[i].start = minutes / 60 * 100 + minutes % 60;
        }
        1 if !s.is_empty() => {
            let i = rng.gen_range(0..s.len());
            s[i].room = rng.gen_range(0..rooms + 1);
        }
        2 if !s.is_empty() => {
            let i = rng.gen_range(0..s.len());
            s.remove(i);
        }
        3 if !s.is_empty() => {
            let e = *s.choose(rng).unwrap();
            s.push(e);
        }
        4 if s.len() >= 2 => {
            let i = rng.gen_range(0..s.len() - 1);
            s.swap(i, i + 1);
        }
        _ => {
            let start = *[900, 930, 1000, 1015, 1200, 1245, 1600, 1690].choose(rng).unwrap();
            let e = ScheduleEntry {
                meeting: rng.gen_range(0..meetings + 1),
                room: rng.gen_range(0..rooms),
                start,
            };
            let at = s.iter().position(|x| x.start > start).unwrap_or(s.len());
            s.insert(at, e);
        }
    }
}

pub fn mutate(inst: &Instance, answer: &CandidateAnswer, rng: &mut impl Rng) -> CandidateAnswer {
    let n = payload_size(inst);
    let mut out = answer.clone();
    let steps = rng.gen_range(1..=2);
    for _ in 0..steps {
        match &mut out {
            CandidateAnswer::VertexList(xs) | CandidateAnswer::IndexList(xs) | CandidateAnswer::Route(xs) => {
                mutate_list(xs, n, rng)
            }
            CandidateAnswer::ColorAssignment(cs) => mutate_colors(cs, rng),
            CandidateAnswer::PartitionPair(a, b) => mutate_pair(a, b, n, rng),
            CandidateAnswer::Schedule(s) => {
                let v = serde_json::to_value(&inst.payload).unwrap();
                let rooms = v["rooms"].as_object().unwrap().len();
                mutate_schedule(s, n, rooms, rng)
            }
            CandidateAnswer::Impossible => out = CandidateAnswer::IndexList(vec![0]),
        }
    }
    out
}

/// A random answer of the task's shape.
pub fn random_answer(inst: &Instance, rng: &mut impl Rng) -> CandidateAnswer {
    let n = payload_size(inst);
    let len = rng.gen_range(0..=n.min(12) + 1);
    let mut list = || (0..len).map(|_| rng.gen_range(0..n + 1)).collect::<Vec<usize>>();
    match inst.baseline_solution {
        CandidateAnswer::VertexList(_) => CandidateAnswer::VertexList(list()),
        CandidateAnswer::IndexList(_) | CandidateAnswer::Impossible => CandidateAnswer::IndexList(list()),
        CandidateAnswer::ColorAssignment(_) => CandidateAnswer::ColorAssignment(list()),
        CandidateAnswer::Route(_) => CandidateAnswer::Route(list()),
        CandidateAnswer::PartitionPair(..) => CandidateAnswer::PartitionPair(list(), list()),
        CandidateAnswer::Schedule(_) => {
            let mut s = Vec::new();
            mutate_schedule(&mut s, n, 3, rng);
            CandidateAnswer::Schedule(s)
        }
    }
}

/// Reference answers, mutations and random answers for one instance.
pub fn candidates(inst: &Instance, mutations: usize, rng: &mut impl Rng) -> Vec<CandidateAnswer> {
    let mut out = vec![inst.baseline_solution.clone()];
    out.extend(inst.planted_solution.clone());
    let seeds = out.clone();
    for i in 0..mutations {
        out.push(mutate(inst, &seeds[i % seeds.len()], rng));
    }
    out.push(random_answer(inst, rng));
    out
}
