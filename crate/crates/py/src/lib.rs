//! Python bindings for qgem-core.
//!
//! Quantities may be passed either as SI floats or as unit strings such as
//! `"35 um"`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;
use qgem_core::closedform::{self, ClosedFormError, WidthProblem};
use qgem_core::config::{ConfigError, Geometry, PhysicalConstants};
use qgem_core::quantum::{Bipartition, QuantumError};
use qgem_core::scan::{self, ScanError, ScanSpec, SearchOptions};
use qgem_core::units::{self, Dimension};

create_exception!(qgem, QgemError, PyException, "Base class for qgem errors.");
create_exception!(qgem, InvalidConfigError, QgemError, "Malformed or out-of-range input.");
create_exception!(qgem, NoCrossingError, QgemError, "The witness never reaches the target.");
create_exception!(qgem, NoSolutionError, QgemError, "The closed-form inverse has no solution.");
create_exception!(qgem, NumericalError, QgemError, "Eigensolver or consistency failure.");

fn config_err(e: ConfigError) -> PyErr {
    InvalidConfigError::new_err(e.to_string())
}

fn quantum_err(e: QuantumError) -> PyErr {
    match e {
        QuantumError::Config(c) => config_err(c),
        QuantumError::InvalidBipartition(_) | QuantumError::SubsystemOutOfRange { .. } => {
            InvalidConfigError::new_err(e.to_string())
        }
        other => NumericalError::new_err(other.to_string()),
    }
}

fn scan_err(e: ScanError) -> PyErr {
    match e {
        ScanError::NoCrossing { .. } => NoCrossingError::new_err(e.to_string()),
        ScanError::Config(c) => config_err(c),
        ScanError::Quantum(q) => quantum_err(q),
        ScanError::InvalidSpec { .. } => InvalidConfigError::new_err(e.to_string()),
        ScanError::OracleMismatch { .. } => NumericalError::new_err(e.to_string()),
    }
}

fn closed_form_err(e: ClosedFormError) -> PyErr {
    match e {
        ClosedFormError::WrongSignBranch { .. } | ClosedFormError::TargetOutOfRange(_) => {
            PyValueError::new_err(e.to_string())
        }
        ClosedFormError::ArcsinDomain(_) | ClosedFormError::NoSolution(_) => {
            NoSolutionError::new_err(e.to_string())
        }
    }
}

fn dimension(name: &str) -> PyResult<Dimension> {
    match name {
        "mass" => Ok(Dimension::Mass),
        "length" => Ok(Dimension::Length),
        "time" => Ok(Dimension::Time),
        "frequency" => Ok(Dimension::Frequency),
        _ => Err(PyValueError::new_err(format!(
            "unknown dimension `{name}` (expected mass, length, time or frequency)"
        ))),
    }
}

/// A float in SI units or a string with a unit suffix.
fn quantity(value: &Bound<'_, PyAny>, dim: Dimension, field: &str) -> PyResult<f64> {
    if let Ok(text) = value.cast::<PyString>() {
        units::parse_quantity(text.to_str()?, dim)
            .map_err(|e| InvalidConfigError::new_err(format!("field `{field}`: {e}")))
    } else {
        value.extract::<f64>()
    }
}

fn geometry(name: &str) -> PyResult<Geometry> {
    name.parse().map_err(config_err)
}

fn bipartition(text: Option<&str>, geometry: Geometry) -> PyResult<Bipartition> {
    let n = geometry.n_qubits();
    match text {
        Some(t) => Bipartition::parse(t, n).map_err(quantum_err),
        None => Ok(Bipartition::default_for(n)),
    }
}

/// One experiment: geometry, mass, minimum separation, superposition width,
/// hold time and dephasing rate, all stored in SI units.
#[pyclass(frozen, skip_from_py_object, module = "qgem")]
#[derive(Clone, Copy)]
struct ExperimentConfig {
    inner: qgem_core::ExperimentConfig,
}

#[pymethods]
impl ExperimentConfig {
    #[new]
    #[pyo3(signature = (geometry, mass, d_min, delta_x, tau, gamma, *, g=None, hbar=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        geometry: &str,
        mass: &Bound<'_, PyAny>,
        d_min: &Bound<'_, PyAny>,
        delta_x: &Bound<'_, PyAny>,
        tau: &Bound<'_, PyAny>,
        gamma: &Bound<'_, PyAny>,
        g: Option<f64>,
        hbar: Option<f64>,
    ) -> PyResult<Self> {
        let mut inner = qgem_core::ExperimentConfig::new(
            self::geometry(geometry)?,
            quantity(mass, Dimension::Mass, "mass")?,
            quantity(d_min, Dimension::Length, "d_min")?,
            quantity(delta_x, Dimension::Length, "delta_x")?,
            quantity(tau, Dimension::Time, "tau")?,
            quantity(gamma, Dimension::Frequency, "gamma")?,
        );
        inner.constants = PhysicalConstants {
            g: g.unwrap_or(PhysicalConstants::CODATA.g),
            hbar: hbar.unwrap_or(PhysicalConstants::CODATA.hbar),
        };
        Ok(Self {
            inner: inner.validate().map_err(config_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        qgem_core::ExperimentConfig::from_json_str(text)
            .map(|inner| Self { inner })
            .map_err(config_err)
    }

    #[allow(clippy::wrong_self_convention)]
    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn with_delta_x(&self, delta_x: &Bound<'_, PyAny>) -> PyResult<Self> {
        let dx = quantity(delta_x, Dimension::Length, "delta_x")?;
        let inner = self.inner.with_delta_x(dx).validate().map_err(config_err)?;
        Ok(Self { inner })
    }

    fn with_gamma(&self, gamma: &Bound<'_, PyAny>) -> PyResult<Self> {
        let g = quantity(gamma, Dimension::Frequency, "gamma")?;
        let inner = self.inner.with_gamma(g).validate().map_err(config_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn geometry(&self) -> &'static str {
        self.inner.geometry.label()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.geometry.n_qubits()
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.inner.mass
    }

    #[getter]
    fn d_min(&self) -> f64 {
        self.inner.d_min
    }

    #[getter]
    fn delta_x(&self) -> f64 {
        self.inner.delta_x
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "ExperimentConfig(geometry='{}', mass={:e}, d_min={:e}, delta_x={:e}, tau={:e}, gamma={:e})",
            c.geometry, c.mass, c.d_min, c.delta_x, c.tau, c.gamma
        )
    }
}

/// Outcome of the witness pipeline for one configuration.
#[pyclass(frozen, module = "qgem", get_all)]
struct WitnessResult {
    /// Minimal eigenvalue of the partially transposed state.
    witness: f64,
    entangled: bool,
    bipartition: String,
    pt_spectrum: Vec<f64>,
    eigenvector: Vec<(f64, f64)>,
    degenerate_minimum: bool,
    closed_form: Option<f64>,
    closed_form_gap: Option<f64>,
}

#[pymethods]
impl WitnessResult {
    fn __repr__(&self) -> String {
        format!(
            "WitnessResult(witness={:e}, entangled={}, bipartition='{}')",
            self.witness,
            if self.entangled { "True" } else { "False" },
            self.bipartition
        )
    }
}

/// Witness expectation for `config`; the single-qubit side of `bipartition`
/// is transposed (default: qubit 2).
#[pyfunction]
#[pyo3(signature = (config, bipartition=None))]
fn witness(config: &ExperimentConfig, bipartition: Option<&str>) -> PyResult<WitnessResult> {
    let b = self::bipartition(bipartition, config.inner.geometry)?;
    let r = qgem_core::witness_expectation_with(&config.inner, b).map_err(quantum_err)?;
    Ok(WitnessResult {
        witness: r.lambda_min,
        entangled: r.entangled,
        bipartition: r.bipartition.to_string(),
        pt_spectrum: r.pt_spectrum,
        eigenvector: r.eigenvector.iter().map(|c| (c.re, c.im)).collect(),
        degenerate_minimum: r.degenerate_minimum,
        closed_form: r.closed_form,
        closed_form_gap: r.closed_form_gap,
    })
}

/// Branch rates (rad/s) indexed by branch integer, relative to the all-up branch.
#[pyfunction]
fn phases(config: &ExperimentConfig) -> Vec<f64> {
    qgem_core::phases(&config.inner).rates().to_vec()
}

/// Sum of pairwise entangling rates (rad/s).
#[pyfunction]
fn entangling_rate(config: &ExperimentConfig) -> f64 {
    qgem_core::phases(&config.inner).total_entangling_rate()
}

/// Closed-form spectrum `(λ₁, λ₂, λ₃, λ₄)` of the partially transposed
/// two-qubit state.
#[pyfunction]
fn pt_eigenvalues(omega_sum: f64, gamma: f64, tau: f64) -> (f64, f64, f64, f64) {
    let q = closedform::pt_eigenvalues(omega_sum, gamma, tau);
    (q.lambda1, q.lambda2, q.lambda3, q.lambda4)
}

/// Width at which the parallel two-qubit witness equals `target_w`.
#[pyfunction]
#[pyo3(signature = (target_w, mass, d_min, tau, gamma))]
fn required_delta_x(
    target_w: f64,
    mass: &Bound<'_, PyAny>,
    d_min: &Bound<'_, PyAny>,
    tau: &Bound<'_, PyAny>,
    gamma: &Bound<'_, PyAny>,
) -> PyResult<f64> {
    let problem = WidthProblem {
        mass: quantity(mass, Dimension::Mass, "mass")?,
        d_min: quantity(d_min, Dimension::Length, "d_min")?,
        tau: quantity(tau, Dimension::Time, "tau")?,
        gamma: quantity(gamma, Dimension::Frequency, "gamma")?,
        constants: PhysicalConstants::CODATA,
    };
    closedform::required_delta_x(target_w, &problem).map_err(closed_form_err)
}

/// Smallest superposition width (m) at which the witness reaches `target_w`.
/// `config.delta_x` and `config.gamma` are ignored.
#[pyfunction]
#[pyo3(signature = (config, gamma, target_w=0.0, bipartition=None))]
fn min_delta_x(
    py: Python<'_>,
    config: &ExperimentConfig,
    gamma: &Bound<'_, PyAny>,
    target_w: f64,
    bipartition: Option<&str>,
) -> PyResult<f64> {
    let gamma = quantity(gamma, Dimension::Frequency, "gamma")?;
    let options = SearchOptions {
        bipartition: Some(self::bipartition(bipartition, config.inner.geometry)?),
        ..SearchOptions::default()
    };
    let base = config.inner;
    py.detach(|| scan::min_delta_x_with(&base, gamma, target_w, &options))
        .map(|t| t.delta_x)
        .map_err(scan_err)
}

fn spec(text: &str) -> PyResult<ScanSpec> {
    ScanSpec::from_json_str(text).map_err(scan_err)
}

/// Grid scan from a JSON spec: `(gamma, delta_x, witness)` tuples, γ-major.
#[pyfunction]
fn grid_scan(py: Python<'_>, spec_json: &str) -> PyResult<Vec<(f64, f64, f64)>> {
    let spec = spec(spec_json)?;
    let rows = py.detach(|| scan::grid_scan(&spec)).map_err(scan_err)?;
    Ok(rows.iter().map(|r| (r.gamma, r.delta_x, r.witness)).collect())
}

/// Minimal width at every γ of the spec: `(gamma, delta_x or None)` tuples.
#[pyfunction]
fn threshold_curve(py: Python<'_>, spec_json: &str) -> PyResult<Vec<(f64, Option<f64>)>> {
    let spec = spec(spec_json)?;
    let points = py.detach(|| scan::threshold_curve(&spec)).map_err(scan_err)?;
    Ok(points
        .iter()
        .map(|p| (p.gamma, p.threshold.map(|t| t.delta_x)))
        .collect())
}

/// Run a grid scan and write it in the CSV format the plotting tools read.
#[pyfunction]
fn write_scan_csv(py: Python<'_>, spec_json: &str, path: &str) -> PyResult<usize> {
    let spec = spec(spec_json)?;
    py.detach(|| {
        let rows = scan::grid_scan(&spec).map_err(scan_err)?;
        let file = std::fs::File::create(path)?;
        scan::write_grid_csv(&rows, std::io::BufWriter::new(file))?;
        Ok(rows.len())
    })
}

/// Parse `"35 um"` style text for the named dimension and return SI.
#[pyfunction]
fn parse_quantity(text: &str, dimension: &str) -> PyResult<f64> {
    units::parse_quantity(text, self::dimension(dimension)?)
        .map_err(|e| InvalidConfigError::new_err(e.to_string()))
}

#[pymodule]
pub fn qgem(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("QgemError", py.get_type::<QgemError>())?;
    m.add("InvalidConfigError", py.get_type::<InvalidConfigError>())?;
    m.add("NoCrossingError", py.get_type::<NoCrossingError>())?;
    m.add("NoSolutionError", py.get_type::<NoSolutionError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add("GRID_CSV_HEADER", scan::GRID_CSV_HEADER)?;
    m.add("CURVE_CSV_HEADER", scan::CURVE_CSV_HEADER)?;
    m.add("G", PhysicalConstants::CODATA.g)?;
    m.add("HBAR", PhysicalConstants::CODATA.hbar)?;
    m.add_class::<ExperimentConfig>()?;
    m.add_class::<WitnessResult>()?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(phases, m)?)?;
    m.add_function(wrap_pyfunction!(entangling_rate, m)?)?;
    m.add_function(wrap_pyfunction!(pt_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(required_delta_x, m)?)?;
    m.add_function(wrap_pyfunction!(min_delta_x, m)?)?;
    m.add_function(wrap_pyfunction!(grid_scan, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_curve, m)?)?;
    m.add_function(wrap_pyfunction!(write_scan_csv, m)?)?;
    m.add_function(wrap_pyfunction!(parse_quantity, m)?)?;
    Ok(())
}
