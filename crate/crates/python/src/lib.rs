//! Python bindings over `np_engine_core`.

use std::path::PathBuf;

use np_engine_core::benchmark::{self, Aggregation};
use np_engine_core as core;
use np_engine_core::{CandidateAnswer, Difficulty, EngineError, MixSpec, ResponseRecord, TaskKind, Violation};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: EngineError) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyOSError::new_err(e.to_string())
    }
}

fn task(id: &str) -> PyResult<TaskKind> {
    id.parse().map_err(err)
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn violations<'py>(py: Python<'py>, vs: &[Violation]) -> PyResult<Bound<'py, PyList>> {
    let items = vs
        .iter()
        .map(|v| (v.code.as_str(), v.detail.as_str()))
        .collect::<Vec<_>>();
    PyList::new(py, items)
}

/// A generated problem instance with its baseline and prompt.
#[pyclass(name = "Instance", frozen, skip_from_py_object, module = "np_engine")]
#[derive(Clone)]
pub struct PyInstance {
    inner: core::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (task, difficulty, seed=0))]
    fn new(task: &str, difficulty: &str, seed: u64) -> PyResult<Self> {
        let kind = self::task(task)?;
        let tier: Difficulty = difficulty.parse().map_err(err)?;
        Ok(PyInstance {
            inner: core::Instance::generate(kind, tier, seed),
        })
    }

    /// Parses one serialized instance record.
    #[staticmethod]
    fn from_json(line: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: core::parse_instance(line).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        core::serialize_instance(&self.inner)
    }

    #[getter]
    fn task(&self) -> &'static str {
        self.inner.task.id()
    }

    #[getter]
    fn category(&self) -> &'static str {
        self.inner.task.category().id()
    }

    #[getter]
    fn direction(&self) -> &'static str {
        self.inner.task.direction().id()
    }

    #[getter]
    fn difficulty(&self) -> &'static str {
        self.inner.difficulty.id()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn instance_id(&self) -> &str {
        &self.inner.instance_id
    }

    #[getter]
    fn prompt(&self) -> &str {
        &self.inner.prompt
    }

    #[getter]
    fn baseline_value(&self) -> u64 {
        self.inner.baseline_value
    }

    /// Baseline answer in the task's answer format.
    #[getter]
    fn baseline_solution(&self) -> String {
        self.inner.baseline_solution.to_string()
    }

    #[getter]
    fn planted_value(&self) -> Option<u64> {
        self.inner.planted_value
    }

    #[getter]
    fn payload<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_loads(py, &self.inner.payload.canonical_json())
    }

    /// Checks an answer literal such as `"[0, 2, 3]"`.
    fn verify<'py>(&self, py: Python<'py>, answer: &str) -> PyResult<Bound<'py, PyDict>> {
        let parsed = core::parse_answer_literal(self.inner.task, answer).map_err(err)?;
        verify_dict(py, &self.inner, &parsed)
    }

    fn score(&self, response_text: &str) -> PyResult<PyReward> {
        score_response(self, response_text)
    }

    fn __repr__(&self) -> String {
        format!("Instance('{}')", self.inner.instance_id)
    }
}

fn verify_dict<'py>(py: Python<'py>, inst: &core::Instance, answer: &CandidateAnswer) -> PyResult<Bound<'py, PyDict>> {
    let out = core::verify(inst.task, &inst.payload, answer).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("feasible", out.feasible)?;
    d.set_item("objective", out.objective)?;
    d.set_item("violations", violations(py, &out.violations)?)?;
    Ok(d)
}

/// Reward components for one response.
#[pyclass(name = "RewardBreakdown", frozen, get_all, module = "np_engine")]
pub struct PyReward {
    instance_id: String,
    total: f64,
    format_reward: f64,
    feasibility_reward: f64,
    ratio: Option<f64>,
    raw_ratio: Option<f64>,
    feasible: bool,
    violations: Vec<(String, String)>,
}

#[pymethods]
impl PyReward {
    fn __repr__(&self) -> String {
        format!("RewardBreakdown(total={}, feasible={})", self.total, self.feasible)
    }
}

impl From<core::RewardBreakdown> for PyReward {
    fn from(r: core::RewardBreakdown) -> Self {
        PyReward {
            instance_id: r.instance_id,
            total: r.total,
            format_reward: r.format_reward,
            feasibility_reward: r.feasibility_reward,
            ratio: r.ratio,
            raw_ratio: r.raw_ratio,
            feasible: r.feasible,
            violations: r.violations.into_iter().map(|v| (v.code, v.detail)).collect(),
        }
    }
}

#[pyfunction]
#[pyo3(signature = (task, difficulty, seed=0))]
fn generate(task: &str, difficulty: &str, seed: u64) -> PyResult<PyInstance> {
    PyInstance::new(task, difficulty, seed)
}

#[pyfunction]
fn score_response(instance: &PyInstance, response_text: &str) -> PyResult<PyReward> {
    Ok(core::score_response(&instance.inner, response_text).map_err(err)?.into())
}

/// Finds the answer after the last "Answer:" marker and parses it.
#[pyfunction]
fn extract_answer<'py>(py: Python<'py>, task: &str, response_text: &str) -> PyResult<Bound<'py, PyDict>> {
    let parsed = core::extract_answer(self::task(task)?, response_text);
    let d = PyDict::new(py);
    d.set_item("format_ok", parsed.format_ok)?;
    d.set_item("answer", parsed.answer.map(|a| a.to_string()))?;
    d.set_item("parse_error", parsed.parse_error)?;
    Ok(d)
}

#[pyfunction]
fn compute_ratio(direction: &str, ms: u64, mh: u64) -> PyResult<(f64, f64)> {
    let r = core::compute_ratio(direction.parse().map_err(err)?, ms, mh).map_err(err)?;
    Ok((r.clamped, r.raw))
}

#[pyfunction]
#[pyo3(signature = (seed=0))]
fn build_npbench(py: Python<'_>, seed: u64) -> Vec<PyInstance> {
    py.detach(|| core::build_npbench(seed))
        .into_iter()
        .map(|inner| PyInstance { inner })
        .collect()
}

/// SR/AR report. `responses` is a list of `(instance_id, response_text)`.
/// Returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, responses, aggregation="category"))]
fn evaluate<'py>(
    py: Python<'py>,
    suite: Vec<PyRef<'py, PyInstance>>,
    responses: Vec<(String, String)>,
    aggregation: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let aggregation = match aggregation {
        "category" => Aggregation::Category,
        "task" => Aggregation::Task,
        other => return Err(PyValueError::new_err(format!("unknown aggregation `{other}`"))),
    };
    let suite: Vec<core::Instance> = suite.iter().map(|i| i.inner.clone()).collect();
    let responses: Vec<ResponseRecord> = responses
        .into_iter()
        .map(|(instance_id, response_text)| ResponseRecord {
            instance_id,
            response_text,
        })
        .collect();
    let report = py.detach(|| benchmark::evaluate(&suite, &responses, aggregation)).map_err(err)?;
    let json = serde_json::to_string(&report).map_err(|e| err(e.into()))?;
    json_loads(py, &json)
}

/// Writes stage files and a manifest to `out_dir`; returns the manifest.
#[pyfunction]
#[pyo3(signature = (out_dir, total, proportions=(5, 4, 1), tasks=None, scale_tasks=None, stages=1, curriculum_order=true, seed=0))]
#[allow(clippy::too_many_arguments)]
fn emit_dataset<'py>(
    py: Python<'py>,
    out_dir: PathBuf,
    total: usize,
    proportions: (u64, u64, u64),
    tasks: Option<Vec<String>>,
    scale_tasks: Option<usize>,
    stages: usize,
    curriculum_order: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mut mix = MixSpec::new([proportions.0, proportions.1, proportions.2], total);
    mix.stages = stages;
    mix.curriculum_order = curriculum_order;
    if let Some(ids) = tasks {
        mix.tasks = ids.iter().map(|t| task(t)).collect::<PyResult<_>>()?;
    }
    if let Some(k) = scale_tasks {
        mix = core::scale_tasks(&mix, k).map_err(err)?;
    }
    let manifest = py.detach(|| core::emit_dataset(&mix, seed, &out_dir)).map_err(err)?;
    let json = serde_json::to_string(&manifest).map_err(|e| err(e.into()))?;
    json_loads(py, &json)
}

#[pymodule]
pub fn np_engine(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyReward>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(score_response, m)?)?;
    m.add_function(wrap_pyfunction!(extract_answer, m)?)?;
    m.add_function(wrap_pyfunction!(compute_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(build_npbench, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(emit_dataset, m)?)?;
    let tasks: Vec<&str> = TaskKind::ALL.iter().map(|t| t.id()).collect();
    m.add("TASKS", tasks)?;
    let tiers: Vec<&str> = Difficulty::ALL.iter().map(|d| d.id()).collect();
    m.add("DIFFICULTIES", tiers)?;
    Ok(())
}
