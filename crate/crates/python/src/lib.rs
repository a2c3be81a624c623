//! Python bindings for `rescomp`.
//!
//! Signals are lists of floats, state matrices are lists of rows, and labels
//! are class indices `0..class_count`.
//!
//! ```python
//! import pyrescomp as rc
//! signals, labels = rc.synth_dataset(3, 50, 64, seed=1)
//! esn = rc.Esn(50, 0.5, seed=7)
//! states = [esn.drive(u) for u in signals]
//! model = rc.PcaReadout.train([rc.norm_vector(s) for s in states], labels, 3, rank=10)
//! model.classify(rc.norm_vector(states[0]))
//! ```

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rescomp::data::{load_dataset as load, synth_dataset as synth};
use rescomp::experiment::{run_on, ExperimentConfig, CSV_HEADER};
use rescomp::metrics::{esn_bound_ratio, separation_ratio as sep_ratio, tdr_bound_ratio, SeparationVariant};
use rescomp::readout::{
    classify_linear, classify_pca, norm_vector as norm_vec, train_linear, train_pca, Centering, LinearReadoutModel,
    NormVector, PcaReadoutModel,
};
use rescomp::reservoir::{apply_mask, make_esn, make_tdr, EsnParams, MultiplexMask, Reservoir, StateMatrix, TdrParams};
use rescomp::{seeded_rng, Activation, ClassPartition, Error, SampleTimes, Signal};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for rescomp::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn activation(name: &str) -> PyResult<Activation> {
    name.parse().py()
}

fn signal(values: Vec<f64>) -> PyResult<Signal> {
    Signal::new(values).py()
}

fn rows(m: &StateMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(<[f64]>::to_vec).collect()
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<StateMatrix> {
    StateMatrix::from_rows(rows).py()
}

fn times(t: Option<Vec<usize>>, len: usize) -> PyResult<SampleTimes> {
    match t {
        Some(t) => SampleTimes::new(t).py(),
        None => SampleTimes::all(len).py(),
    }
}

fn partition(labels: &[usize], class_count: usize) -> PyResult<ClassPartition> {
    ClassPartition::from_labels(labels, class_count).py()
}

fn drive_sampled(r: &impl Reservoir, u: Vec<f64>, t: Option<Vec<usize>>) -> PyResult<Vec<Vec<f64>>> {
    let u = signal(u)?;
    let omega = times(t, u.len())?;
    Ok(rows(&r.drive_sampled(&u, &omega).py()?))
}

/// Echo state network `X(t) = f(W_in u(t) + W_res X(t-1))` with a sparse random
/// `W_res` rescaled to the requested spectral radius (default `0.9999 (1 - alpha)`).
#[pyclass(name = "Esn", module = "pyrescomp", frozen)]
struct PyEsn(EsnParams);

#[pymethods]
impl PyEsn {
    #[new]
    #[pyo3(signature = (node_count, alpha, density=0.2, spectral_radius=None, activation="sine", seed=0))]
    fn new(
        node_count: usize,
        alpha: f64,
        density: f64,
        spectral_radius: Option<f64>,
        activation: &str,
        seed: u64,
    ) -> PyResult<Self> {
        let rho = spectral_radius.unwrap_or(0.9999 * (1.0 - alpha));
        let mut rng = seeded_rng(seed);
        Ok(PyEsn(make_esn(node_count, alpha, density, rho, self::activation(activation)?, &mut rng).py()?))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn spectral_radius(&self) -> f64 {
        self.0.spectral_radius()
    }

    #[getter]
    fn activation(&self) -> String {
        self.0.activation().to_string()
    }

    /// Reservoir weights as a list of rows.
    fn reservoir_weights(&self) -> Vec<Vec<f64>> {
        let w = self.0.reservoir_weights();
        (0..w.nrows()).map(|r| w.row(r).iter().copied().collect()).collect()
    }

    /// Full trajectory, one row per time step.
    fn drive(&self, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(self.0.drive(&signal(u)?).as_matrix()))
    }

    /// States at the given (strictly increasing) times; all times by default.
    #[pyo3(signature = (u, times=None))]
    fn drive_sampled(&self, u: Vec<f64>, times: Option<Vec<usize>>) -> PyResult<Vec<Vec<f64>>> {
        drive_sampled(&self.0, u, times)
    }

    /// Per-time ratio of state distance to its theoretical bound.
    fn bound_ratio(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(esn_bound_ratio(&self.0, &signal(u)?, &signal(v)?).py()?.ratios)
    }

    fn __repr__(&self) -> String {
        format!("Esn(node_count={}, spectral_radius={:.6})", self.0.node_count(), self.0.spectral_radius())
    }
}

/// Time-delay reservoir with one nonlinear head node `h(t) = f(alpha u(t) + beta h(t-N))`
/// and a delay line `X_n(t) = h(t-n)`.
#[pyclass(name = "Tdr", module = "pyrescomp", frozen)]
struct PyTdr(TdrParams);

#[pymethods]
impl PyTdr {
    #[new]
    #[pyo3(signature = (node_count, alpha, beta=None, activation="sine"))]
    fn new(node_count: usize, alpha: f64, beta: Option<f64>, activation: &str) -> PyResult<Self> {
        let beta = beta.unwrap_or(0.9999 * (1.0 - alpha));
        Ok(PyTdr(make_tdr(node_count, alpha, beta, self::activation(activation)?).py()?))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.input_gain()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.attenuation()
    }

    fn drive(&self, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(self.0.drive(&signal(u)?).as_matrix()))
    }

    #[pyo3(signature = (u, times=None))]
    fn drive_sampled(&self, u: Vec<f64>, times: Option<Vec<usize>>) -> PyResult<Vec<Vec<f64>>> {
        drive_sampled(&self.0, u, times)
    }

    fn bound_ratio(&self, u: Vec<f64>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(tdr_bound_ratio(&self.0, &signal(u)?, &signal(v)?).py()?.ratios)
    }

    fn __repr__(&self) -> String {
        format!("Tdr(node_count={}, alpha={}, beta={})", self.0.node_count(), self.0.input_gain(), self.0.attenuation())
    }
}

/// Random `+1/-1` mask of the given length.
#[pyfunction]
#[pyo3(signature = (length, seed=0))]
fn random_mask(length: usize, seed: u64) -> PyResult<Vec<f64>> {
    Ok(MultiplexMask::random(length, &mut seeded_rng(seed)).py()?.values().to_vec())
}

/// Expand every sample of `u` into a block `u(t) * mask`.
#[pyfunction(name = "apply_mask")]
fn py_apply_mask(u: Vec<f64>, mask: Vec<f64>) -> PyResult<Vec<f64>> {
    let mask = MultiplexMask::new(mask).py()?;
    Ok(apply_mask(&signal(u)?, &mask).into_inner())
}

/// Squared state norms, one per sampled time.
#[pyfunction]
fn norm_vector(states: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    Ok(norm_vec(&matrix(&states)?).values().to_vec())
}

/// Per-time ridge-regression readout.
#[pyclass(name = "LinearReadout", module = "pyrescomp", frozen)]
struct PyLinear(LinearReadoutModel);

#[pymethods]
impl PyLinear {
    /// `states[j]` is the sampled-state matrix (rows = times) of training signal `j`.
    #[staticmethod]
    #[pyo3(signature = (states, labels, class_count, regularization=1e-4, times=None))]
    fn train(
        states: Vec<Vec<Vec<f64>>>,
        labels: Vec<usize>,
        class_count: usize,
        regularization: f64,
        times: Option<Vec<usize>>,
    ) -> PyResult<Self> {
        let states = states.iter().map(|s| matrix(s)).collect::<PyResult<Vec<_>>>()?;
        let rows = states.first().map_or(0, StateMatrix::rows);
        let omega = self::times(times, rows)?;
        let p = partition(&labels, class_count)?;
        Ok(PyLinear(train_linear(&states, &p, &omega, regularization).py()?))
    }

    /// Returns `(class, scores)`.
    fn classify(&self, states: Vec<Vec<f64>>) -> PyResult<(usize, Vec<f64>)> {
        let d = classify_linear(&self.0, &matrix(&states)?).py()?;
        Ok((d.class, d.scores))
    }

    /// One `K x N` weight matrix (list of rows) per sampled time.
    fn weights(&self) -> Vec<Vec<Vec<f64>>> {
        self.0
            .weights()
            .iter()
            .map(|w| (0..w.nrows()).map(|r| w.row(r).iter().copied().collect()).collect())
            .collect()
    }

    fn to_bytes(&self) -> PyResult<Vec<u8>> {
        let mut buf = Vec::new();
        self.0.write_to(&mut buf).py()?;
        Ok(buf)
    }

    #[staticmethod]
    fn from_bytes(data: Vec<u8>) -> PyResult<Self> {
        Ok(PyLinear(LinearReadoutModel::read_from(data.as_slice()).py()?))
    }
}

/// Per-class principal-subspace readout on norm vectors.
#[pyclass(name = "PcaReadout", module = "pyrescomp", frozen)]
struct PyPca(PcaReadoutModel);

#[pymethods]
impl PyPca {
    #[staticmethod]
    #[pyo3(signature = (norm_vectors, labels, class_count, rank=10, centered=false, times=None))]
    fn train(
        norm_vectors: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_count: usize,
        rank: usize,
        centered: bool,
        times: Option<Vec<usize>>,
    ) -> PyResult<Self> {
        let b = norm_vectors.into_iter().map(|v| NormVector::new(v).py()).collect::<PyResult<Vec<_>>>()?;
        let omega = self::times(times, b.first().map_or(0, NormVector::len))?;
        let centering = if centered { Centering::Centered } else { Centering::Uncentered };
        let p = partition(&labels, class_count)?;
        Ok(PyPca(train_pca(&b, &p, &omega, rank, centering).py()?))
    }

    /// Returns `(class, residuals)`.
    fn classify(&self, norm_vector: Vec<f64>) -> PyResult<(usize, Vec<f64>)> {
        let d = classify_pca(&self.0, &NormVector::new(norm_vector).py()?).py()?;
        Ok((d.class, d.residuals))
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn to_bytes(&self) -> PyResult<Vec<u8>> {
        let mut buf = Vec::new();
        self.0.write_to(&mut buf).py()?;
        Ok(buf)
    }

    #[staticmethod]
    fn from_bytes(data: Vec<u8>) -> PyResult<Self> {
        Ok(PyPca(PcaReadoutModel::read_from(data.as_slice()).py()?))
    }
}

/// Separation ratio at every sampled time; `variant` is "vector" or "norm".
#[pyfunction]
#[pyo3(signature = (states, labels, class_count, variant="vector"))]
fn separation_ratio(
    states: Vec<Vec<Vec<f64>>>,
    labels: Vec<usize>,
    class_count: usize,
    variant: &str,
) -> PyResult<Vec<f64>> {
    let variant = match variant {
        "vector" => SeparationVariant::Vector,
        "norm" => SeparationVariant::Norm,
        other => return Err(PyValueError::new_err(format!("unknown variant '{other}'"))),
    };
    let states = states.iter().map(|s| matrix(s)).collect::<PyResult<Vec<_>>>()?;
    Ok(sep_ratio(&states, &partition(&labels, class_count)?, variant).py()?.values)
}

/// Synthetic dataset as `(signals, labels)`.
#[pyfunction]
#[pyo3(signature = (class_count, per_class, length, separation=1.0, noise=0.05, seed=0))]
fn synth_dataset(
    class_count: usize,
    per_class: usize,
    length: usize,
    separation: f64,
    noise: f64,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<usize>)> {
    let d = synth(class_count, per_class, length, separation, noise, seed).py()?;
    Ok((d.signals().iter().map(|s| s.to_vec()).collect(), d.labels()))
}

/// Load a binary or CSV dataset as `(signals, labels, class_count)`.
#[pyfunction]
fn load_dataset(path: std::path::PathBuf) -> PyResult<(Vec<Vec<f64>>, Vec<usize>, usize)> {
    let d = load(path).py()?;
    Ok((d.signals().iter().map(|s| s.to_vec()).collect(), d.labels(), d.class_count()))
}

/// Run an experiment described by a TOML string and return its rows as dicts.
/// Nothing is written to disk.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = ExperimentConfig::from_toml_str(config).py()?;
    let data = cfg.load_data().py()?;
    let outcome = py.detach(|| run_on(&cfg, &data)).py()?;
    if let Some(e) = outcome.failure {
        return Err(py_err(e));
    }
    outcome
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            let [kind, n, alpha, readout, lambda, rank, trial, accuracy, time, sep_v, sep_n] = CSV_HEADER;
            d.set_item(kind, r.kind.to_string())?;
            d.set_item(n, r.node_count)?;
            d.set_item(alpha, r.alpha)?;
            d.set_item(readout, r.readout)?;
            d.set_item(lambda, r.lambda)?;
            d.set_item(rank, r.rank)?;
            d.set_item(trial, r.trial)?;
            d.set_item(accuracy, r.accuracy)?;
            d.set_item(time, r.test_time_s)?;
            d.set_item(sep_v, r.max_sep_vector)?;
            d.set_item(sep_n, r.max_sep_norm)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn pyrescomp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEsn>()?;
    m.add_class::<PyTdr>()?;
    m.add_class::<PyLinear>()?;
    m.add_class::<PyPca>()?;
    m.add_function(wrap_pyfunction!(random_mask, m)?)?;
    m.add_function(wrap_pyfunction!(py_apply_mask, m)?)?;
    m.add_function(wrap_pyfunction!(norm_vector, m)?)?;
    m.add_function(wrap_pyfunction!(separation_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(synth_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
