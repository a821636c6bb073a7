//! Final state, decoherence, partial transpose and the PPT witness.
//!
//! Basis index `b` is the integer value of the spin bits with qubit 1 as the
//! most significant bit (see [`crate::geometry::branch_bits`]).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::closedform;
use crate::config::{ConfigError, ExperimentConfig};
use crate::geometry::{self, PhaseSet};
use crate::linalg::{hermitian_eigensystem, CMatrix, LinalgError};

/// Eigenvalues closer together than this are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;
/// Minimal eigenvalues smaller than this in magnitude are reported as exactly 0.
pub const ZERO_SNAP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("subsystem {subsystem} out of range for {n_qubits} qubits")]
    SubsystemOutOfRange { subsystem: usize, n_qubits: usize },
    #[error("invalid bipartition `{0}`")]
    InvalidBipartition(String),
    #[error("phase set contains non-finite rates")]
    NonFinitePhases,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Pure state over `n_qubits` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Density matrix over `n_qubits` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Wrap a matrix without checking positivity; the dimension must be `2^n`.
    pub fn from_matrix(n_qubits: usize, matrix: CMatrix) -> Self {
        assert_eq!(matrix.dim(), 1 << n_qubits);
        Self { n_qubits, matrix }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr(ρ²)`
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64, QuantumError> {
        Ok(hermitian_eigensystem(&self.matrix)?.values[0])
    }
}

/// Which qubit is transposed. Any bipartition of two or three qubits has a
/// single-qubit side, and transposing either side gives the same spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_qubits: usize,
    transposed: usize,
}

impl Bipartition {
    /// `transposed` is 0-based (qubit 1 is index 0).
    pub fn new(n_qubits: usize, transposed: usize) -> Result<Self, QuantumError> {
        if transposed >= n_qubits {
            return Err(QuantumError::SubsystemOutOfRange {
                subsystem: transposed,
                n_qubits,
            });
        }
        Ok(Self { n_qubits, transposed })
    }

    /// Qubit 2 transposed: `T₂` for two qubits, `13|2` for three.
    pub fn default_for(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            transposed: 1,
        }
    }

    pub fn transposed(&self) -> usize {
        self.transposed
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Parse `"13|2"`, `"1|23"`, `"1|2"` or a bare 1-based qubit number such as `"2"`.
    ///
    /// With a `|`, the single-qubit side is the transposed one; when both
    /// sides are single qubits the right-hand side is transposed.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self, QuantumError> {
        let invalid = || QuantumError::InvalidBipartition(text.to_string());
        let digits = |s: &str| -> Result<Vec<usize>, QuantumError> {
            s.trim()
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .filter(|&d| d >= 1 && d <= n_qubits)
                        .ok_or_else(invalid)
                })
                .collect()
        };
        let text_trimmed = text.trim().trim_start_matches(['T', 't']);
        let qubit = match text_trimmed.split_once('|') {
            None => {
                let d = digits(text_trimmed)?;
                if d.len() != 1 {
                    return Err(invalid());
                }
                d[0]
            }
            Some((left, right)) => {
                let (l, r) = (digits(left)?, digits(right)?);
                let mut all: Vec<usize> = l.iter().chain(&r).copied().collect();
                all.sort_unstable();
                all.dedup();
                if all.len() != n_qubits || l.len() + r.len() != n_qubits {
                    return Err(invalid());
                }
                match (l.len(), r.len()) {
                    (_, 1) => r[0],
                    (1, _) => l[0],
                    _ => return Err(invalid()),
                }
            }
        };
        Self::new(n_qubits, qubit - 1)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.n_qubits).filter(|&q| q != self.transposed) {
            write!(f, "{}", q + 1)?;
        }
        write!(f, "|{}", self.transposed + 1)
    }
}

impl FromStr for Bipartition {
    type Err = QuantumError;

    /// Infers the qubit count from the text; prefer [`Bipartition::parse`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n = s.chars().filter(|c| c.is_ascii_digit()).count();
        Self::parse(s, n.max(2))
    }
}

/// `|Ψ⟩ = 2^{−n/2} Σ_b e^{i ω_b τ} |b⟩`
pub fn build_state(phases: &PhaseSet, tau: f64) -> Result<StateVector, QuantumError> {
    if !phases.is_finite() {
        return Err(QuantumError::NonFinitePhases);
    }
    let n = phases.n_qubits();
    let amp = (1.0 / (1u64 << n) as f64).sqrt();
    let amplitudes = phases
        .rates()
        .iter()
        .map(|&w| Complex64::from_polar(amp, w * tau))
        .collect();
    Ok(StateVector {
        n_qubits: n,
        amplitudes,
    })
}

/// `ρ = |Ψ⟩⟨Ψ|`
pub fn density_from_state(state: &StateVector) -> DensityMatrix {
    DensityMatrix {
        n_qubits: state.n_qubits,
        matrix: CMatrix::outer(&state.amplitudes),
    }
}

/// Damp entry `(b, b′)` by `e^{−γτ·k}` where `k` counts the qubit positions
/// at which `b` and `b′` differ.
pub fn apply_dephasing(rho: &DensityMatrix, gamma: f64, tau: f64) -> DensityMatrix {
    let rate = gamma * tau;
    // k ranges over 0..=n; precompute the factors.
    let factors: Vec<f64> = (0..=rho.n_qubits)
        .map(|k| (-rate * k as f64).exp())
        .collect();
    let m = &rho.matrix;
    let matrix = CMatrix::from_fn(m.dim(), |i, j| {
        let differing = (i ^ j).count_ones() as usize;
        m[(i, j)] * factors[differing]
    });
    DensityMatrix {
        n_qubits: rho.n_qubits,
        matrix,
    }
}

/// Transpose the indices of qubit `subsystem` (0-based) of a `2^n × 2^n` matrix.
pub fn partial_transpose(
    m: &CMatrix,
    n_qubits: usize,
    subsystem: usize,
) -> Result<CMatrix, QuantumError> {
    if subsystem >= n_qubits {
        return Err(QuantumError::SubsystemOutOfRange {
            subsystem,
            n_qubits,
        });
    }
    assert_eq!(m.dim(), 1 << n_qubits);
    let mask = 1usize << (n_qubits - 1 - subsystem);
    Ok(CMatrix::from_fn(m.dim(), |i, j| {
        let row = (i & !mask) | (j & mask);
        let col = (j & !mask) | (i & mask);
        m[(row, col)]
    }))
}

/// Multiply by a unit phase so the first component with modulus above
/// `1e-12` is real and positive.
fn canonical_phase(v: &[Complex64]) -> Vec<Complex64> {
    let phase = v
        .iter()
        .find(|z| z.norm() > 1e-12)
        .map(|z| z.conj() / z.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    v.iter().map(|z| z * phase).collect()
}

fn lexicographic_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord.is_ne() {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Lowest eigenpair of a partially transposed density matrix.
#[derive(Debug, Clone)]
struct MinimalEigenpair {
    value: f64,
    vector: Vec<Complex64>,
    degenerate: bool,
    spectrum: Vec<f64>,
}

fn minimal_eigenpair(rho_pt: &CMatrix) -> Result<MinimalEigenpair, QuantumError> {
    let es = hermitian_eigensystem(rho_pt)?;
    let lowest = es.values[0];
    let cluster: Vec<usize> = (0..es.values.len())
        .filter(|&i| es.values[i] - lowest < DEGENERACY_TOLERANCE)
        .collect();
    let vector = cluster
        .iter()
        .map(|&i| canonical_phase(&es.vectors[i]))
        .max_by(|a, b| lexicographic_cmp(a, b))
        .expect("at least one eigenvector");
    let value = if lowest.abs() < ZERO_SNAP { 0.0 } else { lowest };
    Ok(MinimalEigenpair {
        value,
        vector,
        degenerate: cluster.len() > 1,
        spectrum: es.values,
    })
}

/// `W = (|λ₋⟩⟨λ₋|)^{T}` built from a partially transposed density matrix.
#[derive(Debug, Clone)]
pub struct WitnessOperator {
    pub matrix: CMatrix,
    /// Minimal eigenvalue of the partially transposed state, `Tr(Wρ)`.
    pub lambda_min: f64,
    /// The two lowest eigenvalues differ by less than [`DEGENERACY_TOLERANCE`];
    /// the projector then depends on the chosen eigenvector.
    pub degenerate_minimum: bool,
}

impl WitnessOperator {
    /// `Tr(W σ)` for any state `σ`.
    pub fn expectation(&self, sigma: &CMatrix) -> f64 {
        self.matrix.matmul(sigma).trace().re
    }
}

/// PPT witness for `rho_pt`, the state transposed on `subsystem`.
pub fn witness_operator(
    rho_pt: &CMatrix,
    n_qubits: usize,
    subsystem: usize,
) -> Result<WitnessOperator, QuantumError> {
    let min = minimal_eigenpair(rho_pt)?;
    let projector = CMatrix::outer(&min.vector);
    Ok(WitnessOperator {
        matrix: partial_transpose(&projector, n_qubits, subsystem)?,
        lambda_min: min.value,
        degenerate_minimum: min.degenerate,
    })
}

/// Outcome of the full witness pipeline for one configuration.
#[derive(Debug, Clone)]
pub struct WitnessResult {
    /// `⟨W⟩`, the minimal eigenvalue of the partially transposed state.
    pub lambda_min: f64,
    pub eigenvector: Vec<Complex64>,
    /// `lambda_min < 0`
    pub entangled: bool,
    pub bipartition: Bipartition,
    /// Whole partially transposed spectrum, ascending.
    pub pt_spectrum: Vec<f64>,
    pub degenerate_minimum: bool,
    /// Analytic minimum for two-qubit geometries.
    pub closed_form: Option<f64>,
    /// `|lambda_min − closed_form|`
    pub closed_form_gap: Option<f64>,
}

/// Dephased density matrix at the end of the hold time.
pub fn final_density(config: &ExperimentConfig) -> Result<DensityMatrix, QuantumError> {
    let config = config.validate()?;
    let phases = geometry::phases(&config);
    let state = build_state(&phases, config.tau)?;
    Ok(apply_dephasing(
        &density_from_state(&state),
        config.gamma,
        config.tau,
    ))
}

/// Witness with the default bipartition (qubit 2 transposed).
pub fn witness_expectation(config: &ExperimentConfig) -> Result<WitnessResult, QuantumError> {
    let bipartition = Bipartition::default_for(config.geometry.n_qubits());
    witness_expectation_with(config, bipartition)
}

pub fn witness_expectation_with(
    config: &ExperimentConfig,
    bipartition: Bipartition,
) -> Result<WitnessResult, QuantumError> {
    let n = config.geometry.n_qubits();
    if bipartition.n_qubits() != n {
        return Err(QuantumError::InvalidBipartition(bipartition.to_string()));
    }
    let rho = final_density(config)?;
    let rho_pt = partial_transpose(rho.matrix(), n, bipartition.transposed())?;
    let min = minimal_eigenpair(&rho_pt)?;

    let closed_form = (n == 2).then(|| {
        let omega_sum = geometry::phases(config).total_entangling_rate();
        closedform::pt_eigenvalues(omega_sum, config.gamma, config.tau).min()
    });
    Ok(WitnessResult {
        lambda_min: min.value,
        entangled: min.value < 0.0,
        eigenvector: min.vector,
        bipartition,
        pt_spectrum: min.spectrum,
        degenerate_minimum: min.degenerate,
        closed_form,
        closed_form_gap: closed_form.map(|c| (c - min.value).abs()),
    })
}
