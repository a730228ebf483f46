//! Python bindings: `import geodim`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use geodim_core::estimators::{self, EstimatorOutcome, Method};
use geodim_core::geograph::{self, Vertex};
use geodim_core::harness::{self, ExperimentConfig, RadiusRule};
use geodim_core::pointcloud::{self, DensityKind, DensitySpec, Metric};
use geodim_core::{specfun, wd as wdmod, Error};
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Numerical(_) => PyArithmeticError::new_err(err.to_string()),
        Error::Io(_) => PyOSError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for geodim_core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Result of inverting a statistic: `delta` is the dimension estimate.
#[pyclass(name = "DimensionEstimate", frozen, module = "geodim")]
struct PyDimensionEstimate {
    #[pyo3(get)]
    delta: u32,
    #[pyo3(get)]
    statistic: f64,
    #[pyo3(get)]
    evaluations: u32,
    #[pyo3(get)]
    clamped: bool,
}

#[pymethods]
impl PyDimensionEstimate {
    fn __repr__(&self) -> String {
        format!(
            "DimensionEstimate(delta={}, statistic={}, clamped={})",
            self.delta, self.statistic, self.clamped
        )
    }
}

impl From<wdmod::DimensionEstimate> for PyDimensionEstimate {
    fn from(e: wdmod::DimensionEstimate) -> Self {
        Self {
            delta: e.delta,
            statistic: e.statistic,
            evaluations: e.evaluations,
            clamped: e.clamped,
        }
    }
}

/// One estimator run. `failure` is None on success, otherwise a short tag
/// such as "degenerate-degree".
#[pyclass(name = "Estimate", frozen, module = "geodim")]
struct PyEstimate {
    inner: EstimatorOutcome,
}

#[pymethods]
impl PyEstimate {
    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.as_str()
    }

    #[getter]
    fn statistic(&self) -> Option<f64> {
        self.inner.statistic()
    }

    #[getter]
    fn delta(&self) -> Option<u32> {
        self.inner.delta()
    }

    #[getter]
    fn clamped(&self) -> Option<bool> {
        self.inner.clamped()
    }

    #[getter]
    fn failure(&self) -> Option<&'static str> {
        self.inner.failure().map(|f| f.as_str())
    }

    #[getter]
    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = &self.inner.diagnostics;
        let out = PyDict::new(py);
        if let Some(v) = d.vertex {
            out.set_item("vertex", v)?;
        }
        for (key, value) in [
            ("degree", d.degree),
            ("neighborhood_edges", d.neighborhood_edges),
            ("triangles", d.triangles),
            ("denominator", d.denominator),
            ("qualifying_vertices", d.qualifying_vertices),
        ] {
            if let Some(v) = value {
                out.set_item(key, v)?;
            }
        }
        Ok(out)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("outcome serializes")
    }

    fn __repr__(&self) -> String {
        format!("Estimate({})", self.to_json())
    }
}

/// Points in `[0,1)^d` (torus) or `R^d` (euclidean).
#[pyclass(name = "PointCloud", frozen, module = "geodim")]
struct PyPointCloud {
    inner: pointcloud::PointCloud,
}

#[pymethods]
impl PyPointCloud {
    #[new]
    #[pyo3(signature = (points, metric = "euclidean"))]
    fn new(points: Vec<Vec<f64>>, metric: &str) -> PyResult<Self> {
        let metric: Metric = metric.parse().py_err()?;
        let dim = match points.first() {
            Some(p) => p.len(),
            None => return Err(PyValueError::new_err("cannot infer the dimension of an empty point list")),
        };
        if points.iter().any(|p| p.len() != dim) {
            return Err(PyValueError::new_err("points have differing dimensions"));
        }
        let coords = points.into_iter().flatten().collect();
        Ok(Self {
            inner: pointcloud::PointCloud::new(coords, dim, metric).py_err()?,
        })
    }

    /// Draw `n` points from a density given as text, e.g. "gauss:sigma=1".
    #[staticmethod]
    fn sample(density: &str, d: usize, n: usize, seed: u64) -> PyResult<Self> {
        let spec = density_spec(density, d)?;
        Ok(Self {
            inner: pointcloud::sample_points(&spec, n, seed),
        })
    }

    #[staticmethod]
    fn read_csv(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| to_py(e.into()))?;
        Ok(Self {
            inner: pointcloud::PointCloud::read_csv(BufReader::new(file)).py_err()?,
        })
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        let file = File::create(path).map_err(|e| to_py(e.into()))?;
        let mut out = BufWriter::new(file);
        self.inner.write_csv(&mut out).py_err()?;
        out.flush().map_err(|e| to_py(e.into()))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn metric(&self) -> String {
        self.inner.metric().to_string()
    }

    fn point(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.len() {
            return Err(PyValueError::new_err(format!("point index {i} out of range")));
        }
        Ok(self.inner.point(i).to_vec())
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        self.inner.points().map(<[f64]>::to_vec).collect()
    }

    fn distance(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.len();
        if i >= n || j >= n {
            return Err(PyValueError::new_err("point index out of range"));
        }
        pointcloud::distance(self.inner.metric(), self.inner.point(i), self.inner.point(j)).py_err()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PointCloud(n={}, dim={}, metric={})", self.inner.len(), self.inner.dim(), self.inner.metric())
    }
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", frozen, module = "geodim")]
struct PyGraph {
    inner: geograph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> PyResult<Self> {
        Ok(Self {
            inner: geograph::Graph::from_edges(n, edges).py_err()?,
        })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| to_py(e.into()))?;
        Ok(Self {
            inner: geograph::read_edge_list(BufReader::new(file)).py_err()?,
        })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        let file = File::create(path).map_err(|e| to_py(e.into()))?;
        geograph::write_edge_list(&self.inner, BufWriter::new(file)).py_err()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    #[getter]
    fn max_degree(&self) -> u64 {
        self.inner.max_degree()
    }

    fn degree(&self, v: Vertex) -> PyResult<u64> {
        self.check(v)?;
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: Vertex) -> PyResult<Vec<Vertex>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> PyResult<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.inner.has_edge(u, v))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.edges().collect()
    }

    /// Edges among the neighbors of `v`.
    fn neighborhood_edges(&self, v: Vertex) -> PyResult<u64> {
        self.check(v)?;
        Ok(self.inner.neighborhood_edges(v))
    }

    /// `(degree, neighborhood_edges)` for every vertex.
    fn vertex_stats(&self) -> Vec<(u64, u64)> {
        self.inner.vertex_stats().into_iter().map(|s| (s.degree, s.delta)).collect()
    }

    fn count_triangles(&self) -> u64 {
        self.inner.count_triangles()
    }

    fn count_cherries(&self) -> u64 {
        self.inner.count_cherries()
    }

    fn count_max_labeled_cherries(&self) -> u64 {
        self.inner.count_max_labeled_cherries()
    }

    fn shuffle_labels(&self, seed: u64) -> Self {
        Self {
            inner: self.inner.shuffle_labels(seed),
        }
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

impl PyGraph {
    fn check(&self, v: Vertex) -> PyResult<()> {
        if (v as usize) < self.inner.n() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("vertex {v} out of range for n = {}", self.inner.n())))
        }
    }
}

fn density_spec(density: &str, d: usize) -> PyResult<DensitySpec> {
    let kind: DensityKind = density.parse().py_err()?;
    DensitySpec::new(kind, d).py_err()
}

#[pyfunction]
fn wd(d: u32) -> PyResult<f64> {
    wdmod::wd(d).py_err()
}

/// Invert a statistic to the dimension whose `w_d` is closest.
#[pyfunction]
#[pyo3(signature = (statistic, cap = wdmod::DEFAULT_DIMENSION_CAP))]
fn dim_from_stat(statistic: f64, cap: u32) -> PyResult<PyDimensionEstimate> {
    wdmod::dim_from_stat(statistic, cap).map(Into::into).py_err()
}

#[pyfunction]
fn ln_gamma(z: f64) -> PyResult<f64> {
    specfun::ln_gamma(z).py_err()
}

/// Regularized incomplete beta `I_x(a, b)`; `upper=True` gives `1 - I_x(a, b)`.
#[pyfunction]
#[pyo3(signature = (a, b, x, upper = false))]
fn reg_inc_beta(a: f64, b: f64, x: f64, upper: bool) -> PyResult<f64> {
    let p = specfun::RegBetaParams::new(a, b, x).py_err()?;
    if upper {
        specfun::reg_inc_beta_upper(p).py_err()
    } else {
        specfun::reg_inc_beta(p).py_err()
    }
}

#[pyfunction]
fn build_rgg(py: Python<'_>, cloud: &PyPointCloud, r: f64) -> PyResult<PyGraph> {
    let inner = py.detach(|| geograph::build_rgg(&cloud.inner, r)).py_err()?;
    Ok(PyGraph { inner })
}

/// Sample points and connect those within distance `r`.
#[pyfunction]
fn generate(py: Python<'_>, density: &str, d: usize, n: usize, r: f64, seed: u64) -> PyResult<PyGraph> {
    let spec = density_spec(density, d)?;
    let inner = py.detach(|| harness::generate(&spec, n, r, seed)).py_err()?;
    Ok(PyGraph { inner })
}

/// Radius for a rule: "r" (explicit), "nrd" or "n32rd", with its constant.
#[pyfunction]
fn resolve_radius(rule: &str, value: f64, n: usize, d: usize, metric: &str) -> PyResult<f64> {
    let rule = match rule {
        "r" | "explicit" => RadiusRule::Explicit(value),
        "nrd" => RadiusRule::Nrd(value),
        "n32rd" => RadiusRule::N32rd(value),
        other => return Err(PyValueError::new_err(format!("unknown radius rule `{other}`"))),
    };
    harness::resolve_radius(rule, n, d, metric.parse().py_err()?).py_err()
}

/// Estimate the dimension of `graph`. Label-dependent methods see the graph
/// under a random relabeling drawn from `seed`.
#[pyfunction]
#[pyo3(signature = (graph, method, seed = 0, cap = wdmod::DEFAULT_DIMENSION_CAP))]
fn estimate_dimension(py: Python<'_>, graph: &PyGraph, method: &str, seed: u64, cap: u32) -> PyResult<PyEstimate> {
    let method: Method = method.parse().py_err()?;
    let inner = py
        .detach(|| estimators::estimate_dimension(&graph.inner, method, seed, cap))
        .py_err()?;
    Ok(PyEstimate { inner })
}

/// Run an experiment from its JSON config. Returns `(csv, summary_json)`.
#[pyfunction]
#[pyo3(signature = (config_json, workers = None, timing = false))]
fn run_experiment(py: Python<'_>, config_json: &str, workers: Option<usize>, timing: bool) -> PyResult<(String, String)> {
    let config = ExperimentConfig::from_json(config_json).py_err()?;
    let report = py
        .detach(|| match workers {
            Some(w) => harness::run_experiment_with_workers(&config, w),
            None => harness::run_experiment(&config),
        })
        .py_err()?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv, timing).py_err()?;
    let csv = String::from_utf8(csv).expect("csv is utf-8");
    Ok((csv, report.summary_json()))
}

#[pymodule]
fn geodim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDimensionEstimate>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyPointCloud>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(wd, m)?)?;
    m.add_function(wrap_pyfunction!(dim_from_stat, m)?)?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(reg_inc_beta, m)?)?;
    m.add_function(wrap_pyfunction!(build_rgg, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_radius, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("MAX_DIMENSION", wdmod::MAX_DIMENSION)?;
    m.add("DEFAULT_DIMENSION_CAP", wdmod::DEFAULT_DIMENSION_CAP)?;
    m.add("METHODS", Method::ALL.iter().map(|m| m.as_str()).collect::<Vec<_>>())?;
    Ok(())
}
