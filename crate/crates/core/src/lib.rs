//! Entanglement witnesses for gravitationally coupled matter-wave
//! interferometers.
//!
//! The pipeline for one experiment is
//! [`geometry::phases`] → [`quantum::build_state`] → [`quantum::density_from_state`]
//! → [`quantum::apply_dephasing`] → [`quantum::partial_transpose`] → minimal
//! eigenvalue. [`quantum::witness_expectation`] runs all of it. For the two
//! qubit setups [`closedform`] gives the same numbers analytically, and
//! [`scan`] sweeps decoherence rate and superposition width.

pub mod closedform;
pub mod config;
pub mod geometry;
pub mod linalg;
pub mod quantum;
pub mod scan;
pub mod units;

pub use closedform::{pt_eigenvalues, required_delta_x, EigenQuad, WidthProblem};
pub use config::{ConfigError, ExperimentConfig, Geometry, PhysicalConstants};
pub use geometry::{phases, PhaseSet};
pub use quantum::{witness_expectation, witness_expectation_with, Bipartition, WitnessResult};
pub use scan::{grid_scan, min_delta_x, threshold_curve, ScanError, ScanRow, ScanSpec};
