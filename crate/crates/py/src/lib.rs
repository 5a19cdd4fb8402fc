use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use qib_core::io::to_json_string;
use qib_core::scenarios::ScenarioConfig;
use qib_core::{self as core, QibError};

fn err(e: QibError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Generator", module = "qib", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGenerator(core::Generator);

#[pymethods]
impl PyGenerator {
    #[new]
    fn new(eigenvalues: Vec<f64>) -> PyResult<Self> {
        core::Generator::new(eigenvalues).map(Self).map_err(err)
    }

    /// Photon number `0..=max_n`.
    #[staticmethod]
    fn number(max_n: usize) -> PyResult<Self> {
        core::Generator::number(max_n).map(Self).map_err(err)
    }

    /// `J_z` for spin `two_j / 2`.
    #[staticmethod]
    fn spin(two_j: usize) -> PyResult<Self> {
        core::Generator::spin(two_j).map(Self).map_err(err)
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }

    fn __repr__(&self) -> String {
        format!("Generator({:?})", self.0.eigenvalues())
    }
}

#[pyclass(name = "ProbeState", module = "qib", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProbeState(core::ProbeState);

#[pymethods]
impl PyProbeState {
    /// Amplitudes in the generator eigenbasis; `normalize` rescales them.
    #[new]
    #[pyo3(signature = (amplitudes, normalize = false))]
    fn new(amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let s = if normalize {
            core::ProbeState::normalized(amplitudes)
        } else {
            core::ProbeState::new(amplitudes)
        };
        s.map(Self).map_err(err)
    }

    #[staticmethod]
    fn heisenberg(generator: &PyGenerator, mean: f64, theta: f64) -> PyResult<Self> {
        core::heisenberg_state(&generator.0, mean, theta)
            .map(Self)
            .map_err(err)
    }

    /// Returns `(generator, state)` for the symmetrized coherent state.
    #[staticmethod]
    fn truncated_coherent(nbar: usize, phase_slope: f64) -> PyResult<(PyGenerator, Self)> {
        let (g, s) = core::truncated_coherent_state(nbar, phase_slope).map_err(err)?;
        Ok((PyGenerator(g), Self(s)))
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }
}

#[pyclass(name = "MeasurementBasis", module = "qib", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBasis(core::MeasurementBasis);

#[pymethods]
impl PyBasis {
    /// Rows are the measurement vectors in the generator eigenbasis.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        core::MeasurementBasis::from_rows(rows).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (dim, beta = None, eta_phases = None))]
    fn fourier(dim: usize, beta: Option<f64>, eta_phases: Option<Vec<f64>>) -> PyResult<Self> {
        let spec = core::FourierBasisSpec::new(
            dim,
            beta.unwrap_or_else(|| core::canonical_beta(dim)),
            eta_phases.unwrap_or_else(|| vec![0.0; dim]),
        )
        .map_err(err)?;
        core::fourier_basis(&spec).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (dim, vartheta = 0.0))]
    fn wigner(dim: usize, vartheta: f64) -> PyResult<Self> {
        let spec = core::WignerBasisSpec::new(dim, vartheta).map_err(err)?;
        core::wigner_basis(&spec).map(Self).map_err(err)
    }

    /// Fourier basis on the support of `state` with eigenphases matched to it.
    #[staticmethod]
    fn matched_fourier(state: &PyProbeState) -> PyResult<Self> {
        core::measurements::matched_fourier_basis(&state.0)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<Complex64>> {
        self.0.rows()
    }

    fn balance_deviation(&self) -> f64 {
        core::check_balance(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }
}

#[pyfunction]
fn qfi(state: &PyProbeState, generator: &PyGenerator) -> PyResult<f64> {
    core::qfi(&state.0, &generator.0).map_err(err)
}

#[pyfunction]
fn mean(state: &PyProbeState, generator: &PyGenerator) -> PyResult<f64> {
    core::mean_a(&state.0, &generator.0).map_err(err)
}

#[pyfunction]
fn skewness(state: &PyProbeState, generator: &PyGenerator) -> PyResult<f64> {
    core::skewness(&state.0, &generator.0).map_err(err)
}

#[pyfunction]
fn probabilities(
    state: &PyProbeState,
    generator: &PyGenerator,
    basis: &PyBasis,
    epsilon: f64,
) -> PyResult<Vec<f64>> {
    core::probabilities(&state.0, &generator.0, &basis.0, epsilon).map_err(err)
}

#[pyfunction]
fn classical_fisher(
    state: &PyProbeState,
    generator: &PyGenerator,
    basis: &PyBasis,
    epsilon: f64,
) -> PyResult<f64> {
    core::classical_fisher(&state.0, &generator.0, &basis.0, epsilon).map_err(err)
}

#[pyfunction]
fn saturation_residual(
    state: &PyProbeState,
    generator: &PyGenerator,
    basis: &PyBasis,
    epsilon: f64,
) -> PyResult<f64> {
    core::saturation_residual(&state.0, &generator.0, &basis.0, epsilon).map_err(err)
}

/// Symmetry certificate as a dict.
#[pyfunction]
fn certify<'py>(
    py: Python<'py>,
    state: &PyProbeState,
    generator: &PyGenerator,
) -> PyResult<Bound<'py, PyAny>> {
    let cert = core::certify(&state.0, &generator.0).map_err(err)?;
    json_to_py(py, &to_json_string(&cert))
}

#[pyfunction]
fn check_phase_condition<'py>(
    py: Python<'py>,
    state: &PyProbeState,
    basis: &PyBasis,
) -> PyResult<Bound<'py, PyAny>> {
    let r = core::check_phase_condition(&state.0, &basis.0).map_err(err)?;
    json_to_py(py, &to_json_string(&r))
}

/// Sweep over `epsilons`, or one period of `grid_points` points when absent.
#[pyfunction]
#[pyo3(signature = (state, generator, basis, epsilons = None, grid_points = 101))]
fn saturation_sweep<'py>(
    py: Python<'py>,
    state: &PyProbeState,
    generator: &PyGenerator,
    basis: &PyBasis,
    epsilons: Option<Vec<f64>>,
    grid_points: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let grid = match epsilons {
        Some(p) => core::EpsilonGrid::new(p),
        None => core::EpsilonGrid::default_for(&state.0, &generator.0, grid_points),
    }
    .map_err(err)?;
    let report = core::saturation_sweep(&state.0, &generator.0, &basis.0, &grid).map_err(err)?;
    json_to_py(py, &report.to_json())
}

#[pyfunction]
fn wigner_d_half_pi(dim: usize) -> PyResult<Vec<Vec<f64>>> {
    let d = core::wigner_d_half_pi(dim).map_err(err)?;
    Ok((0..dim).map(|r| d.row(r).iter().copied().collect()).collect())
}

/// Runs a scenario. `config` is a JSON object string; defaults when absent.
#[pyfunction]
#[pyo3(signature = (kind, config = None))]
fn run_scenario<'py>(
    py: Python<'py>,
    kind: &str,
    config: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = match config {
        Some(text) => {
            let c: ScenarioConfig = core::io::parse_json(text, "config").map_err(err)?;
            if c.kind() != kind {
                return Err(PyValueError::new_err(format!(
                    "config describes a {} scenario, not {kind}",
                    c.kind()
                )));
            }
            c
        }
        None => ScenarioConfig::default_for(kind).map_err(err)?,
    };
    let outcome = cfg.run().map_err(err)?;
    json_to_py(py, &to_json_string(&outcome))
}

#[pymodule]
fn qib(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGenerator>()?;
    m.add_class::<PyProbeState>()?;
    m.add_class::<PyBasis>()?;
    m.add_function(wrap_pyfunction!(qfi, m)?)?;
    m.add_function(wrap_pyfunction!(mean, m)?)?;
    m.add_function(wrap_pyfunction!(skewness, m)?)?;
    m.add_function(wrap_pyfunction!(probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(classical_fisher, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(check_phase_condition, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_d_half_pi, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
