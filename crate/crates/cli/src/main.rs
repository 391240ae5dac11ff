use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use np_engine_core::benchmark::{self, Aggregation};
use np_engine_core::jsonl::{read_instances, read_responses, write_records};
use np_engine_core::service::{self, Scorer};
use np_engine_core::{
    build_npbench, emit_dataset, evaluate, extract_answer, scale_tasks, verify, CandidateAnswer, Difficulty,
    EngineError, Instance, MixSpec, ResponseRecord, TaskKind, Violation,
};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "np-engine", version, about = "Generate, verify and score NP-hard optimization instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances, or the full benchmark suite with --suite.
    Generate(GenerateArgs),
    /// Check responses for format and feasibility.
    Verify(VerifyArgs),
    /// Score responses into reward records.
    Score(ScoreArgs),
    /// Write the baseline solution for each instance.
    Solve(SolveArgs),
    /// Compute the SR/AR report for a suite.
    Bench(BenchArgs),
    /// Emit a curriculum training dataset.
    Dataset(DatasetArgs),
    /// Run the line-oriented scoring service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, env = "NP_ENGINE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, required_unless_present = "suite")]
    task: Option<String>,
    #[arg(long, required_unless_present = "suite")]
    difficulty: Option<String>,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Build all 1000 benchmark instances instead.
    #[arg(long, conflicts_with_all = ["task", "difficulty", "count"])]
    suite: bool,
    #[command(flatten)]
    seed: SeedArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    responses: PathBuf,
    /// Include the parsed answer in each record.
    #[arg(long)]
    dump_parsed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    responses: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instances: PathBuf,
    /// Emit response records that answer with the baseline.
    #[arg(long)]
    as_responses: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Category,
    Task,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long)]
    responses: PathBuf,
    #[arg(long, value_enum, default_value = "category")]
    aggregation: AggregationArg,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DatasetArgs {
    /// Easy:medium:hard weights.
    #[arg(long, default_value = "5:4:1")]
    mix: String,
    #[arg(long)]
    total: usize,
    /// Comma-separated task ids.
    #[arg(long, value_delimiter = ',', conflicts_with = "scale_tasks")]
    tasks: Vec<String>,
    /// Use the first k tasks of the registry.
    #[arg(long)]
    scale_tasks: Option<usize>,
    #[arg(long, default_value_t = 1)]
    stages: usize,
    /// Shuffle records instead of ordering easy to hard.
    #[arg(long)]
    no_curriculum: bool,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    /// Listen on this TCP port instead of stdio.
    #[arg(long)]
    tcp: Option<u16>,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Preload instances so requests may reference them by id.
    #[arg(long)]
    suite: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    workers: usize,
}

enum Failure {
    Validation(String),
    Io(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn at(path: &Path, e: EngineError) -> Failure {
    match Failure::from(e) {
        Failure::Validation(m) => Failure::Validation(format!("{}: {m}", path.display())),
        Failure::Io(m) => Failure::Io(format!("{}: {m}", path.display())),
    }
}

fn load_instances(path: &Path) -> Result<Vec<Instance>, Failure> {
    read_instances(path).map_err(|e| at(path, e))
}

fn load_responses(path: &Path) -> Result<Vec<ResponseRecord>, Failure> {
    read_responses(path).map_err(|e| at(path, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Score(a) => score(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Dataset(a) => dataset(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: Serialize>(out: &Option<PathBuf>, records: &[T]) -> CmdResult {
    write_records(sink(out)?, records)?;
    Ok(())
}

fn instance_lines(out: &Option<PathBuf>, instances: &[Instance]) -> CmdResult {
    let values: Vec<_> = instances.iter().map(Instance::to_value).collect();
    emit(out, &values)
}

fn generate(a: GenerateArgs) -> CmdResult {
    let seed = a.seed.seed;
    let instances = if a.suite {
        build_npbench(seed)
    } else {
        let task: TaskKind = a.task.as_deref().unwrap_or_default().parse()?;
        let tier: Difficulty = a.difficulty.as_deref().unwrap_or_default().parse()?;
        let end = seed
            .checked_add(a.count)
            .ok_or_else(|| Failure::Validation("seed + count overflows".into()))?;
        (seed..end).into_par_iter().map(|s| Instance::generate(task, tier, s)).collect()
    };
    instance_lines(&a.out, &instances)
}

/// Pairs each response with its instance, in response order.
fn join<'a>(instances: &'a [Instance], responses: &[ResponseRecord]) -> Result<Vec<&'a Instance>, Failure> {
    let by_id: std::collections::HashMap<_, _> = instances.iter().map(|i| (i.instance_id.as_str(), i)).collect();
    responses
        .iter()
        .map(|r| {
            by_id
                .get(r.instance_id.as_str())
                .copied()
                .ok_or_else(|| EngineError::UnknownInstance(r.instance_id.clone()).into())
        })
        .collect()
}

#[derive(Serialize)]
struct VerifyRecord {
    instance_id: String,
    format_ok: bool,
    parse_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parsed: Option<CandidateAnswer>,
    feasible: bool,
    objective: Option<u64>,
    violations: Vec<Violation>,
}

fn verify_cmd(a: VerifyArgs) -> CmdResult {
    let instances = load_instances(&a.instances)?;
    let responses = load_responses(&a.responses)?;
    let joined = join(&instances, &responses)?;
    let records = responses
        .par_iter()
        .zip(joined)
        .map(|(r, inst)| {
            let parsed = extract_answer(inst.task, &r.response_text);
            let outcome = match &parsed.answer {
                Some(ans) => Some(verify(inst.task, &inst.payload, ans)?),
                None => None,
            };
            Ok(VerifyRecord {
                instance_id: r.instance_id.clone(),
                format_ok: parsed.format_ok,
                parse_error: parsed.parse_error,
                parsed: if a.dump_parsed { parsed.answer } else { None },
                feasible: outcome.as_ref().is_some_and(|o| o.feasible),
                objective: outcome.as_ref().and_then(|o| o.objective),
                violations: outcome.map(|o| o.violations).unwrap_or_default(),
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    emit(&a.out, &records)
}

fn score(a: ScoreArgs) -> CmdResult {
    let instances = load_instances(&a.instances)?;
    let responses = load_responses(&a.responses)?;
    let scored = benchmark::score_responses(&instances, &responses)?;
    emit(&a.out, &scored)
}

#[derive(Serialize)]
struct SolveRecord<'a> {
    instance_id: &'a str,
    answer: String,
    value: u64,
}

fn solve(a: SolveArgs) -> CmdResult {
    let instances = load_instances(&a.instances)?;
    if a.as_responses {
        let records: Vec<_> = instances
            .iter()
            .map(|i| ResponseRecord {
                instance_id: i.instance_id.clone(),
                response_text: format!("Answer: {}", i.baseline_solution),
            })
            .collect();
        emit(&a.out, &records)
    } else {
        let records: Vec<_> = instances
            .iter()
            .map(|i| SolveRecord {
                instance_id: &i.instance_id,
                answer: i.baseline_solution.to_string(),
                value: i.baseline_value,
            })
            .collect();
        emit(&a.out, &records)
    }
}

fn bench(a: BenchArgs) -> CmdResult {
    let suite = load_instances(&a.suite)?;
    let responses = load_responses(&a.responses)?;
    let aggregation = match a.aggregation {
        AggregationArg::Category => Aggregation::Category,
        AggregationArg::Task => Aggregation::Task,
    };
    let report = evaluate(&suite, &responses, aggregation)?;
    print!("{report}");
    if let Some(path) = &a.out {
        let json = serde_json::to_string_pretty(&report).map_err(EngineError::from)?;
        fs::write(path, json + "\n")?;
    }
    Ok(())
}

fn parse_mix(text: &str) -> Result<[u64; 3], Failure> {
    let parts: Vec<_> = text.split(':').map(|p| p.trim().parse::<u64>()).collect();
    match parts.as_slice() {
        [Ok(e), Ok(m), Ok(h)] => Ok([*e, *m, *h]),
        _ => Err(Failure::Validation(format!("mix `{text}` is not of the form E:M:H"))),
    }
}

fn dataset(a: DatasetArgs) -> CmdResult {
    let mut mix = MixSpec::new(parse_mix(&a.mix)?, a.total);
    mix.stages = a.stages;
    mix.curriculum_order = !a.no_curriculum;
    if !a.tasks.is_empty() {
        mix.tasks = a.tasks.iter().map(|t| t.parse()).collect::<Result<_, _>>()?;
    }
    if let Some(k) = a.scale_tasks {
        mix = scale_tasks(&mix, k)?;
    }
    let manifest = emit_dataset(&mix, a.seed.seed, Path::new(&a.out))?;
    for stage in &manifest.stages {
        eprintln!("{}: {} records", stage.file, stage.records);
    }
    Ok(())
}

fn serve(a: ServeArgs) -> CmdResult {
    if a.workers == 0 {
        return Err(Failure::Validation("workers must be positive".into()));
    }
    let suite = match &a.suite {
        Some(p) => load_instances(p)?,
        None => Vec::new(),
    };
    let scorer = Scorer::new(suite);
    match a.tcp {
        Some(port) => service::serve_tcp(Arc::new(scorer), (a.host.as_str(), port), a.workers)?,
        None => service::serve_stdio(&scorer, a.workers)?,
    }
    Ok(())
}
