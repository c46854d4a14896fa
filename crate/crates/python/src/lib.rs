//! Python module `cgl`.
//!
//! Agent settings are passed as plain dicts with the same keys as the TOML
//! `[agent]` table; missing keys take their defaults. Run results, trial
//! reports and scenario outputs come back as dicts.

use cgl_core::agent::{self, PenaltySpec, RewardSpec};
use cgl_core::harness::{self, Scenario, TrialBatch};
use cgl_core::{
    AgentConfig, CoincidentMatrix, EnvSpec, EnvironmentGraph, FloorMode, NodeId, Normalization, Plasticity, StateVector,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

create_exception!(cgl, CglError, PyValueError);

fn err(e: cgl_core::CglError) -> PyErr {
    CglError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn config(py: Python<'_>, cfg: Option<&Bound<'_, PyDict>>) -> PyResult<AgentConfig> {
    let Some(cfg) = cfg else {
        return Ok(AgentConfig::default());
    };
    let text: String = py.import("json")?.call_method1("dumps", (cfg,))?.extract()?;
    let parsed: AgentConfig =
        serde_json::from_str(&text).map_err(|e| CglError::new_err(format!("agent config: {e}")))?;
    parsed.validate().map_err(err)?;
    Ok(parsed)
}

fn state(values: Vec<f64>) -> PyResult<StateVector> {
    StateVector::new(values).map_err(err)
}

#[pyclass(name = "EnvironmentGraph", module = "cgl", frozen)]
struct PyEnvironment {
    inner: EnvironmentGraph,
}

#[pymethods]
impl PyEnvironment {
    /// Builds from a spec such as `lattice:8x8` or `ws:100,12,0.5`.
    #[staticmethod]
    #[pyo3(signature = (spec, seed = 0))]
    fn from_spec(spec: &str, seed: u64) -> PyResult<Self> {
        let spec: EnvSpec = spec.parse().map_err(err)?;
        Ok(Self {
            inner: spec.build(seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: cgl_core::graph::generate_path(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn lattice(rows: usize, cols: usize) -> PyResult<Self> {
        Ok(Self {
            inner: cgl_core::graph::generate_lattice(rows, cols).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, k, beta, seed = 0))]
    fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: cgl_core::graph::generate_watts_strogatz(n, k, beta, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: cgl_core::graph_io::load_graph(path).map_err(err)?,
        })
    }

    fn to_edge_list(&self) -> String {
        cgl_core::graph_io::to_edge_list(&self.inner)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: NodeId) -> PyResult<Vec<NodeId>> {
        self.inner.check_node(v).map_err(err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.inner.has_edge(u, v)
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "EnvironmentGraph({}, nodes={}, edges={})",
            self.inner.kind().label(),
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(name = "CoincidentMatrix", module = "cgl")]
struct PyMatrix {
    inner: CoincidentMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    #[pyo3(signature = (sensory_count, deinforcement = 0.5, floor = 0.05, floor_mode = "clamp", normalization = "weighted"))]
    fn new(
        sensory_count: usize,
        deinforcement: f64,
        floor: f64,
        floor_mode: &str,
        normalization: &str,
    ) -> PyResult<Self> {
        let floor_mode: FloorMode = floor_mode.parse().map_err(err)?;
        let normalization: Normalization = normalization.parse().map_err(err)?;
        let plasticity = Plasticity {
            deinforcement,
            floor,
            floor_mode,
        };
        let mut inner = CoincidentMatrix::new(sensory_count, plasticity).map_err(err)?;
        inner.set_normalization(normalization);
        Ok(Self { inner })
    }

    /// Unit conductance on every environment edge.
    #[staticmethod]
    fn from_environment(env: &PyEnvironment) -> PyResult<Self> {
        Ok(Self {
            inner: CoincidentMatrix::from_environment(&env.inner, Plasticity::default()).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CoincidentMatrix::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn sensory_count(&self) -> usize {
        self.inner.sensory_count()
    }

    #[getter]
    fn normalization(&self) -> &'static str {
        match self.inner.normalization() {
            Normalization::Weighted => "weighted",
            Normalization::Count => "count",
        }
    }

    #[setter]
    fn set_normalization(&mut self, value: &str) -> PyResult<()> {
        self.inner.set_normalization(value.parse().map_err(err)?);
        Ok(())
    }

    fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.inner.get(i, j)
    }

    fn set_conductance(&mut self, i: NodeId, j: NodeId, value: f64) -> PyResult<()> {
        self.inner.set_conductance(i, j, value).map_err(err)
    }

    fn wire_reward(&mut self, target: NodeId, weight: f64) -> PyResult<NodeId> {
        self.inner.wire_reward(target, weight).map_err(err)
    }

    fn wire_penalty(&mut self, target: NodeId, edge_count: usize, weight: f64) -> PyResult<Vec<NodeId>> {
        self.inner.wire_penalty(target, edge_count, weight).map_err(err)
    }

    /// One round of coincidence detection over the listed pairs.
    fn apply_coincidence(&mut self, active: Vec<f64>, pairs: Vec<(NodeId, NodeId)>) -> PyResult<()> {
        self.inner.apply_coincidence(&state(active)?, &pairs).map_err(err)
    }

    /// `(i, j, conductance)` for `i < j`.
    fn entries(&self) -> Vec<(NodeId, NodeId, f64)> {
        self.inner.entries()
    }

    fn degrees(&self) -> Vec<f64> {
        self.inner.degrees()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "CoincidentMatrix(size={}, sensory={}, edges={})",
            self.inner.size(),
            self.inner.sensory_count(),
            self.inner.entries().len()
        )
    }
}

#[pyfunction]
fn cell_update(x: Vec<f64>, c: &PyMatrix) -> PyResult<Vec<f64>> {
    Ok(cgl_core::cell_update(&state(x)?, &c.inner).map_err(err)?.into_inner())
}

#[pyfunction]
#[pyo3(signature = (x, c, recursions, latent = 0.0, previous = None))]
fn recurse(
    x: Vec<f64>,
    c: &PyMatrix,
    recursions: usize,
    latent: f64,
    previous: Option<Vec<f64>>,
) -> PyResult<Vec<f64>> {
    let previous = match previous {
        Some(p) => state(p)?,
        None => StateVector::zeros(x.len()),
    };
    Ok(cgl_core::recurse(&state(x)?, &previous, &c.inner, recursions, latent)
        .map_err(err)?
        .into_inner())
}

/// Reference propagation by dense transition-matrix products.
#[pyfunction]
fn oracle_walk(c: &PyMatrix, x: Vec<f64>, recursions: usize) -> PyResult<Vec<f64>> {
    Ok(harness::oracle_walk(&c.inner, &state(x)?, recursions)
        .map_err(err)?
        .into_inner())
}

#[pyfunction]
fn memory_vector(output: Vec<f64>, input: Vec<f64>) -> PyResult<Vec<f64>> {
    cgl_core::memory_vector(&state(output)?, &state(input)?).map_err(err)
}

/// Fresh matrix for `env` with rewards `(node, weight)` and penalties
/// `(node, edge_count, weight)` wired in.
#[pyfunction]
#[pyo3(signature = (env, rewards = Vec::new(), penalties = Vec::new(), config = None))]
fn wired_matrix(
    py: Python<'_>,
    env: &PyEnvironment,
    rewards: Vec<(NodeId, f64)>,
    penalties: Vec<(NodeId, usize, f64)>,
    config: Option<&Bound<'_, PyDict>>,
) -> PyResult<PyMatrix> {
    let cfg = self::config(py, config)?;
    Ok(PyMatrix {
        inner: agent::wired_matrix(&env.inner, &cfg, &rewards, &penalties).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (env, wired, config = None))]
fn train(
    py: Python<'_>,
    env: &PyEnvironment,
    wired: &PyMatrix,
    config: Option<&Bound<'_, PyDict>>,
) -> PyResult<PyMatrix> {
    let cfg = self::config(py, config)?;
    Ok(PyMatrix {
        inner: agent::train(&env.inner, &wired.inner, &cfg).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (env, trained, start, target, config = None))]
fn navigate(
    py: Python<'_>,
    env: &PyEnvironment,
    trained: &PyMatrix,
    start: NodeId,
    target: NodeId,
    config: Option<&Bound<'_, PyDict>>,
) -> PyResult<Py<PyAny>> {
    let cfg = self::config(py, config)?;
    let run = agent::navigate(&env.inner, &trained.inner, start, target, &cfg).map_err(err)?;
    json_to_py(py, &run.to_json())
}

/// Randomized start/target battery on an environment spec.
#[pyfunction]
#[pyo3(signature = (env, reward_weight, pairs = 400, seed = 0, config = None, workers = 0))]
fn run_trials(
    py: Python<'_>,
    env: &str,
    reward_weight: f64,
    pairs: usize,
    seed: u64,
    config: Option<&Bound<'_, PyDict>>,
    workers: usize,
) -> PyResult<Py<PyAny>> {
    let batch = TrialBatch {
        env: env.parse().map_err(err)?,
        reward_weight,
        pair_count: pairs,
        seed,
        agent: self::config(py, config)?,
    };
    let report = py.detach(|| harness::run_trials(&batch, workers)).map_err(err)?;
    let text = serde_json::to_string(&report).map_err(|e| CglError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

/// Runs a built-in scenario, optionally with TOML overrides merged in.
#[pyfunction]
#[pyo3(signature = (name, overrides = None, workers = 0))]
fn run_scenario(py: Python<'_>, name: &str, overrides: Option<&str>, workers: usize) -> PyResult<Py<PyAny>> {
    let mut scenario = Scenario::builtin(name).map_err(err)?;
    if let Some(text) = overrides {
        let table: toml::Table = toml::from_str(text).map_err(|e| CglError::new_err(format!("overrides: {e}")))?;
        scenario = scenario.with_overrides(&table).map_err(err)?;
    }
    let output = py.detach(|| harness::run_scenario(&scenario, workers)).map_err(err)?;
    json_to_py(py, &output.to_json())
}

#[pyfunction]
fn scenario_names() -> Vec<&'static str> {
    harness::scenario_names()
}

/// Parses `NODE:WEIGHT` and `NODE:COUNT:WEIGHT` strings into tuples.
#[pyfunction]
fn parse_reward(text: &str) -> PyResult<(NodeId, f64)> {
    let r: RewardSpec = text.parse().map_err(err)?;
    Ok((r.node, r.weight))
}

#[pyfunction]
fn parse_penalty(text: &str) -> PyResult<(NodeId, usize, f64)> {
    let p: PenaltySpec = text.parse().map_err(err)?;
    Ok((p.node, p.count, p.weight))
}

#[pymodule]
fn cgl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CglError", m.py().get_type::<CglError>())?;
    m.add_class::<PyEnvironment>()?;
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(cell_update, m)?)?;
    m.add_function(wrap_pyfunction!(recurse, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_walk, m)?)?;
    m.add_function(wrap_pyfunction!(memory_vector, m)?)?;
    m.add_function(wrap_pyfunction!(wired_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(navigate, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_names, m)?)?;
    m.add_function(wrap_pyfunction!(parse_reward, m)?)?;
    m.add_function(wrap_pyfunction!(parse_penalty, m)?)?;
    Ok(())
}
