//! Acceptance suite. Prints one PASS/FAIL line per primary criterion and
//! exits non-zero if any criterion fails.

#[path = "../common/mod.rs"]
mod common;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::time::{Duration, Instant};

use np_engine_core::benchmark::{build_npbench, evaluate, Aggregation, ResponseRecord};
use np_engine_core::curriculum::{emit_dataset, parse_record, Manifest, MixSpec, MANIFEST_FILE};
use np_engine_core::rng::derive_stream;
use np_engine_core::tasks::partitioning::{community_graph, BisectionParams};
use np_engine_core::tasks::planning::random_tsp;
use np_engine_core::{
    compute_ratio, score_response, serialize_instance, solve, verify, CandidateAnswer, Difficulty, Direction,
    Instance, Payload, Solution, TaskKind,
};
use rand::Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use common::oracle::{check_instance, keyed, num, nums, wire};
use common::{optimum, perturb};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn determinism() -> Outcome {
    let mut combos = 0;
    for task in TaskKind::ALL {
        for tier in Difficulty::ALL {
            let run = || -> String {
                (0..20u64)
                    .map(|s| serialize_instance(&Instance::generate(task, tier, 1000 + s)) + "\n")
                    .collect()
            };
            let (a, b) = (run(), run());
            ensure(a == b, || format!("{task}/{tier}: two runs differ"))?;
            combos += 1;
        }
    }
    Ok(format!("{combos} task x tier combinations, 20 instances each, byte-identical"))
}

/// Set cover payloads where one element is removed from every subset, so
/// `Impossible` becomes the right answer.
fn uncoverable(inst: &Instance) -> Instance {
    let mut p = wire(&inst.payload);
    let subsets = p["subsets"].as_object_mut().unwrap();
    for s in subsets.values_mut() {
        let kept: Vec<u64> = nums(s).into_iter().filter(|&e| e != 0).collect();
        *s = json!(kept);
    }
    let payload = Payload::from_value(TaskKind::SetCover, p).unwrap();
    let baseline = solve(TaskKind::SetCover, &payload, None).unwrap();
    Instance {
        payload,
        baseline_value: baseline.value,
        baseline_solution: baseline.answer,
        ..inst.clone()
    }
}

fn verifier_oracle() -> Outcome {
    let mut rng = derive_stream(1, "acceptance:verifier");
    let mut report = Vec::new();
    for task in TaskKind::ALL {
        let (mut cases, mut feasible) = (0, 0);
        for seed in 0..200u64 {
            let mut inst = Instance::generate(task, Difficulty::Easy, 50_000 + seed);
            if task == TaskKind::SetCover && seed % 5 == 0 {
                inst = uncoverable(&inst);
            }
            let mut answers = perturb::candidates(&inst, 12, &mut rng);
            if task == TaskKind::SetCover {
                answers.push(CandidateAnswer::Impossible);
            }
            for answer in answers {
                let lib = verify(task, &inst.payload, &answer).map_err(|e| e.to_string())?;
                let oracle = check_instance(&inst, &answer);
                ensure(lib.feasible == oracle.feasible && lib.objective == oracle.objective, || {
                    format!(
                        "{task} seed {seed}: answer {answer} library {:?}/{:?} oracle {:?}",
                        lib.feasible, lib.objective, oracle
                    )
                })?;
                ensure(lib.feasible == lib.violations.is_empty(), || {
                    format!("{task}: violations disagree with feasibility")
                })?;
                cases += 1;
                feasible += usize::from(oracle.feasible);
            }
        }
        report.push(format!("{task} {feasible}/{cases}"));
    }
    Ok(format!("100% agreement (feasible/total): {}", report.join(", ")))
}

fn random_knapsack(rng: &mut impl Rng) -> Value {
    let n = rng.gen_range(1..=20);
    let items: BTreeMap<String, Value> = (0..n)
        .map(|i| (i.to_string(), json!([rng.gen_range(1..=50), rng.gen_range(1..=60)])))
        .collect();
    json!({"capacity": rng.gen_range(1..=n * 25), "items": items})
}

fn random_set_cover(rng: &mut impl Rng) -> Value {
    let u = rng.gen_range(4..=16usize);
    let s = rng.gen_range(2..=12usize);
    let mut subsets: Vec<Vec<usize>> = (0..s)
        .map(|_| (0..u).filter(|_| rng.gen_bool(0.3)).collect())
        .collect();
    for e in 0..u {
        if !subsets.iter().any(|x| x.contains(&e)) {
            let i = rng.gen_range(0..s);
            subsets[i].push(e);
            subsets[i].sort_unstable();
        }
    }
    for x in subsets.iter_mut().filter(|x| x.is_empty()) {
        x.push(rng.gen_range(0..u));
    }
    let map: BTreeMap<String, Value> = subsets.iter().enumerate().map(|(i, x)| (i.to_string(), json!(x))).collect();
    json!({"universe_size": u, "subsets": map})
}

fn baseline_quality() -> Outcome {
    let mut rng = derive_stream(2, "acceptance:baselines");
    let mut lines = Vec::new();

    // subset sum: every tier has at most 20 numbers
    let mut checked = 0;
    for tier in Difficulty::ALL {
        for seed in 0..50u64 {
            let inst = Instance::generate(TaskKind::SubsetSum, tier, 60_000 + seed);
            let best = optimum::subset_sum(&wire(&inst.payload)).ok_or("planted subset missing")?;
            ensure(inst.baseline_value == best, || {
                format!("subset_sum {}: baseline {} optimum {best}", inst.instance_id, inst.baseline_value)
            })?;
            checked += 1;
        }
    }
    lines.push(format!("subset_sum exact {checked}/{checked}"));

    let mut checked = 0;
    for seed in 0..200u64 {
        let inst = Instance::generate(TaskKind::Knapsack, Difficulty::Easy, 61_000 + seed);
        if keyed(&wire(&inst.payload)["items"]).len() > 20 {
            continue;
        }
        let best = optimum::knapsack(&wire(&inst.payload));
        ensure(inst.baseline_value == best, || {
            format!("knapsack {}: baseline {} optimum {best}", inst.instance_id, inst.baseline_value)
        })?;
        checked += 1;
    }
    for _ in 0..200 {
        let raw = random_knapsack(&mut rng);
        let payload = Payload::from_value(TaskKind::Knapsack, raw.clone()).map_err(|e| e.to_string())?;
        let got = solve(TaskKind::Knapsack, &payload, None).map_err(|e| e.to_string())?;
        let best = optimum::knapsack(&raw);
        ensure(got.value == best, || format!("knapsack {raw}: baseline {} optimum {best}", got.value))?;
        checked += 1;
    }
    lines.push(format!("knapsack exact {checked}/{checked}"));

    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut payloads: Vec<Value> = (0..200u64)
        .map(|s| wire(&Instance::generate(TaskKind::SetCover, Difficulty::Easy, 62_000 + s).payload))
        .collect();
    payloads.extend((0..200).map(|_| random_set_cover(&mut rng)));
    for raw in payloads {
        if keyed(&raw["subsets"]).len() > 12 {
            continue;
        }
        let payload = Payload::from_value(TaskKind::SetCover, raw.clone()).map_err(|e| e.to_string())?;
        let got = solve(TaskKind::SetCover, &payload, None).map_err(|e| e.to_string())?;
        let best = optimum::set_cover(&raw).ok_or("uncoverable payload")?;
        let u = num(&raw["universe_size"]) as f64;
        let bound = (u.ln() + 1.0) * best as f64;
        ensure(got.value as f64 <= bound, || format!("set_cover {raw}: greedy {} > bound {bound:.2}", got.value))?;
        worst = worst.max(got.value as f64 / best as f64);
        checked += 1;
    }
    lines.push(format!("set_cover within (ln|U|+1)x {checked}/{checked}, worst greedy/opt {worst:.2}"));

    let mut within = 0;
    for seed in 0..100u64 {
        let mut r = derive_stream(seed, "acceptance:tsp");
        let n = r.gen_range(4..=10);
        let payload = Payload::Tsp(random_tsp(n, &mut r));
        let got = solve(TaskKind::Tsp, &payload, None).map_err(|e| e.to_string())?;
        let best = optimum::tsp(&wire(&payload));
        within += usize::from(got.value as f64 <= best as f64 * 1.05);
    }
    ensure(within >= 95, || format!("tsp within 5% on only {within}/100 seeds"))?;
    lines.push(format!("tsp within 5% on {within}/100"));

    let (mut exact, mut exact_unplanted) = (0, 0);
    for seed in 0..100u64 {
        let mut r = derive_stream(seed, "acceptance:bisection");
        let tier = Difficulty::ALL[seed as usize % 4];
        let n = r.gen_range(6..=12);
        let (g, side) = community_graph(n, &BisectionParams::for_tier(tier), &mut r);
        let planted = Solution {
            answer: CandidateAnswer::PartitionPair(
                (0..n).filter(|&v| side[v]).collect(),
                (0..n).filter(|&v| !side[v]).collect(),
            ),
            value: g.cut_weight(&side),
        };
        let payload = Payload::Bisection(g);
        let got = solve(TaskKind::BalancedBisection, &payload, Some(&planted)).map_err(|e| e.to_string())?;
        let best = optimum::bisection(&wire(&payload));
        exact += usize::from(got.value == best);
        let cold = solve(TaskKind::BalancedBisection, &payload, None).map_err(|e| e.to_string())?;
        exact_unplanted += usize::from(cold.value == best);
    }
    ensure(exact >= 95, || format!("bisection exact on only {exact}/100 seeds"))?;
    lines.push(format!(
        "bisection exact on {exact}/100 ({exact_unplanted}/100 from random starts alone)"
    ));
    Ok(lines.join("; "))
}

fn planted_feasibility() -> Outcome {
    let mut total = 0;
    for task in TaskKind::ALL {
        for tier in Difficulty::ALL {
            for seed in 0..100u64 {
                let inst = Instance::generate(task, tier, 70_000 + seed);
                let Some(plant) = inst.planted() else {
                    ensure(inst.planted_value.is_none(), || format!("{task}: value without plant"))?;
                    continue;
                };
                let lib = verify(task, &inst.payload, &plant.answer).map_err(|e| e.to_string())?;
                let oracle = check_instance(&inst, &plant.answer);
                ensure(
                    lib.feasible && oracle.feasible && lib.objective == Some(plant.value) && oracle.objective == Some(plant.value),
                    || format!("{}: plant {} fails ({:?})", inst.instance_id, plant.answer, lib.violations),
                )?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} planted solutions feasible with recorded objective"))
}

fn expected_ratio(direction: Direction, ms: u64, mh: u64) -> f64 {
    match direction {
        Direction::Maximize => (ms as f64 / mh as f64).min(1.0),
        Direction::Minimize if ms == 0 => 1.0,
        Direction::Minimize => (mh as f64 / ms as f64).min(1.0),
    }
}

fn reward_table() -> Outcome {
    let mut rng = derive_stream(3, "acceptance:reward");
    let mut branches = [0usize; 4];
    let mut echoes = 0;
    for task in TaskKind::ALL {
        for k in 0..50u64 {
            let tier = Difficulty::ALL[rng.gen_range(0..4)];
            let inst = Instance::generate(task, tier, rng.gen::<u64>() ^ k);
            let echo = score_response(&inst, &format!("Step by step...\nAnswer: {}", inst.baseline_solution))
                .map_err(|e| e.to_string())?;
            ensure(echo.total == 2.0 && echo.ratio == Some(1.0), || format!("{}: echo gave {}", inst.instance_id, echo.total))?;
            echoes += 1;

            for answer in perturb::candidates(&inst, 6, &mut rng) {
                let oracle = check_instance(&inst, &answer);
                let good = score_response(&inst, &format!("Answer: {answer}")).map_err(|e| e.to_string())?;
                let bad = score_response(&inst, &format!("My answer would be {answer}")).map_err(|e| e.to_string())?;
                let want = match oracle.objective {
                    Some(ms) => 1.0 + expected_ratio(task.direction(), ms, inst.baseline_value),
                    None => -0.5,
                };
                ensure(good.total == want, || format!("{}: {answer} scored {} want {want}", inst.instance_id, good.total))?;
                ensure(bad.total == -2.5, || format!("{}: unmarked answer scored {}", inst.instance_id, bad.total))?;
                let i = usize::from(!oracle.feasible);
                branches[i] += 1;
                branches[2 + i] += 1;
            }
        }
    }
    ensure(branches.iter().all(|&b| b > 0), || format!("branch coverage {branches:?}"))?;
    let ratio = compute_ratio(Direction::Minimize, 78, 80).map_err(|e| e.to_string())?;
    ensure(ratio.clamped == 1.0 && ratio.raw > 1.0, || "clamp".into())?;
    Ok(format!(
        "ok+feasible {} (1+ratio), ok+infeasible {} (-0.5), bad+feasible {} (-2.5), bad+infeasible {} (-2.5); {echoes} echoes scored 2.0",
        branches[0], branches[1], branches[2], branches[3]
    ))
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    lo <= x && x <= hi
}

fn conformance(suite: &[Instance]) -> Outcome {
    for inst in suite {
        let p = wire(&inst.payload);
        let id = &inst.instance_id;
        let n = p.get("n").map(num).unwrap_or(0) as f64;
        let plant = inst.planted_value.map(|v| v as f64);
        let fail = |what: &str| format!("{id}: {what} out of range");
        match inst.task {
            TaskKind::MaxClique => {
                ensure(within(n, 16.0, 20.0), || fail("|V|"))?;
                ensure(within(plant.unwrap(), 4.0, 8.0), || fail("clique size"))?;
            }
            TaskKind::MaxIndependentSet => {
                ensure(within(n, 40.0, 50.0), || fail("|V|"))?;
                ensure(within(plant.unwrap(), 16.0, 20.0), || fail("independent set size"))?;
            }
            TaskKind::GraphColoring => {
                ensure(within(n, 32.0, 40.0), || fail("|V|"))?;
                ensure(within(plant.unwrap(), 6.0, 8.0), || fail("colors"))?;
                let (_, edges) = common::oracle::edges(&p);
                let density = edges.len() as f64 / (n * (n - 1.0));
                ensure(within(density, 0.3, 0.7), || fail("edge density"))?;
            }
            TaskKind::MeetingScheduling => {
                let meetings = keyed(&p["meetings"]);
                ensure(within(meetings.len() as f64, 8.0, 10.0), || fail("meetings"))?;
                ensure(within(keyed(&p["availability"]).len() as f64, 7.0, 9.0), || fail("attendees"))?;
                ensure(within(keyed(&p["rooms"]).len() as f64, 6.0, 7.0), || fail("rooms"))?;
                ensure(meetings.iter().all(|m| nums(&m[0]).len() <= 5), || fail("attendees per meeting"))?;
            }
            TaskKind::BalancedBisection => ensure(within(n, 45.0, 55.0), || fail("|V|"))?,
            TaskKind::SubsetSum => {
                let xs: Vec<u64> = keyed(&p["numbers"]).into_iter().map(num).collect();
                ensure(within(xs.len() as f64, 15.0, 20.0), || fail("numbers"))?;
                ensure(xs.iter().all(|&x| (1..=15).contains(&x)), || fail("values"))?;
                ensure(within(plant.unwrap(), 10.0, 15.0), || fail("solution size"))?;
            }
            TaskKind::SetCover => {
                ensure(within(num(&p["universe_size"]) as f64, 30.0, 40.0), || fail("|U|"))?;
                ensure(within(keyed(&p["subsets"]).len() as f64, 20.0, 30.0), || fail("|S|"))?;
            }
            TaskKind::Knapsack => {
                let items: Vec<(u64, u64)> = keyed(&p["items"]).into_iter().map(|it| (num(&it[0]), num(&it[1]))).collect();
                ensure(within(items.len() as f64, 55.0, 80.0), || fail("items"))?;
                ensure(items.iter().all(|&(w, _)| (50..=200).contains(&w)), || fail("weights"))?;
                let Some(CandidateAnswer::IndexList(chosen)) = &inst.planted_solution else {
                    return Err(fail("plant"));
                };
                ensure(within(chosen.len() as f64, 25.0, 35.0), || fail("planted items"))?;
                let pw: u64 = chosen.iter().map(|&i| items[i].0).sum();
                let cap = num(&p["capacity"]) as f64;
                ensure(within(cap / pw as f64, 1.02 - 1.0 / pw as f64, 1.15), || fail("capacity ratio"))?;
                for &i in chosen {
                    let (w, v) = items[i];
                    ensure(within(v as f64 / w as f64, 1.2 - 1.0 / w as f64, 1.6 + 1.0 / w as f64), || {
                        fail("value/weight ratio")
                    })?;
                }
            }
            TaskKind::Tsp => {
                ensure(within(n, 45.0, 55.0), || fail("cities"))?;
                let d = common::oracle::distance_matrix(&p);
                let ok = (0..d.len()).all(|a| (0..d.len()).all(|b| a == b || (d[a][b] == d[b][a] && (1..=100).contains(&d[a][b]))));
                ensure(ok, || fail("distances"))?;
            }
            TaskKind::HamiltonianCycle => {
                ensure(within(n, 40.0, 50.0), || fail("|V|"))?;
                ensure(p["density"].as_f64() == Some(0.5), || fail("density"))?;
                let (_, edges) = common::oracle::edges(&p);
                let want = (0.5 * n * (n - 1.0) / 2.0).round();
                ensure(edges.len() as f64 / 2.0 == want, || fail("edge count"))?;
            }
        }
    }
    Ok(format!("{} benchmark instances within tier parameter ranges", suite.len()))
}

fn npbench(suite: &[Instance]) -> Outcome {
    ensure(suite.len() == 1000, || format!("suite has {} instances", suite.len()))?;
    for task in TaskKind::ALL {
        let count = suite.iter().filter(|i| i.task == task).count();
        ensure(count == 100, || format!("{task}: {count} instances"))?;
    }
    ensure(suite.iter().all(|i| i.difficulty == Difficulty::Benchmark), || "non-benchmark tier".into())?;
    let again: String = build_npbench(7).iter().map(serialize_instance).collect();
    ensure(again == suite.iter().map(serialize_instance).collect::<String>(), || "suite not reproducible".into())?;

    let echo: Vec<ResponseRecord> = suite
        .iter()
        .map(|i| ResponseRecord {
            instance_id: i.instance_id.clone(),
            response_text: format!("Answer: {}", i.baseline_solution),
        })
        .collect();
    let full = evaluate(suite, &echo, Aggregation::Category).map_err(|e| e.to_string())?;
    ensure(full.overall.sr == 100.0 && full.overall.ar == 100.0, || format!("echo overall {:?}", full.overall))?;
    let empty = evaluate(suite, &[], Aggregation::Category).map_err(|e| e.to_string())?;
    ensure(empty.overall.sr == 0.0 && empty.overall.ar == 0.0, || format!("empty overall {:?}", empty.overall))?;
    Ok(format!(
        "1000 instances; echo SR {:.1} AR {:.1}; empty SR {:.1}",
        full.overall.sr, full.overall.ar, empty.overall.sr
    ))
}

fn curriculum() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut mix = MixSpec::new([5, 4, 1], 5000);
    mix.stages = 3;
    let manifest = emit_dataset(&mix, 11, dir.path()).map_err(|e| e.to_string())?;
    ensure(manifest.tier_counts == [2500, 2000, 500], || format!("tier counts {:?}", manifest.tier_counts))?;
    let on_disk: Manifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap()).map_err(|e| e.to_string())?;
    ensure(on_disk == manifest, || "manifest on disk differs".into())?;
    ensure(manifest.stages.len() == 3, || "stage count".into())?;

    let mut ids = HashSet::new();
    let mut tiers = [0usize; 3];
    let mut tasks = HashSet::new();
    for stage in &manifest.stages {
        let body = fs::read_to_string(dir.path().join(&stage.file)).map_err(|e| e.to_string())?;
        let digest: String = Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        ensure(digest == stage.sha256, || format!("{}: digest mismatch", stage.file))?;
        let records: Vec<Instance> = body.lines().map(parse_record).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        ensure(records.len() == stage.records, || format!("{}: record count", stage.file))?;
        ensure(records.windows(2).all(|w| w[0].difficulty <= w[1].difficulty), || {
            format!("{}: tiers out of curriculum order", stage.file)
        })?;
        for r in &records {
            ensure(r.difficulty != Difficulty::Benchmark, || "benchmark tier in training data".into())?;
            ensure(ids.insert(r.instance_id.clone()), || format!("{} appears twice", r.instance_id))?;
            tiers[r.difficulty as usize] += 1;
            tasks.insert(r.task);
        }
    }
    ensure(tiers == [2500, 2000, 500], || format!("union tiers {tiers:?}"))?;
    ensure(tasks.len() == 10, || "not all tasks emitted".into())?;
    let sizes: Vec<usize> = manifest.stages.iter().map(|s| s.records).collect();
    Ok(format!("tiers 2500/2000/500, 3 disjoint curriculum-ordered stages {sizes:?}, digests verified"))
}

fn main() {
    let mut failures = 0;
    let mut run = |name: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({elapsed:.1?})"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why} ({elapsed:.1?})");
            }
        }
    };
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let suite_start = Instant::now();
    let suite = build_npbench(7);
    let suite_time = suite_start.elapsed();

    run("determinism", minutes(1), &mut determinism);
    run("verifier-oracle equivalence", minutes(5), &mut verifier_oracle);
    run("baseline exactness and quality", minutes(10), &mut baseline_quality);
    run("planted-solution feasibility", minutes(2), &mut planted_feasibility);
    run("reward truth table and echo", minutes(1), &mut reward_table);
    run("tier parameter conformance", minutes(2), &mut || conformance(&suite));
    run("npbench pipeline", minutes(3) - suite_time, &mut || npbench(&suite));
    run("curriculum emission", minutes(2), &mut curriculum);

    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
