//! Analytic partially transposed spectrum for the two-qubit setups and the
//! inverse problem: the superposition width that reaches a target witness.
//!
//! With `θ = (ω₁ + ω₂)τ/2` and `x = e^{−γτ}` the spectrum of `ρ^{T₂}` is
//!
//! ```text
//! λ₁,₂ = 1/4 − x/4 · (x ∓ 2 sin θ)
//! λ₃,₄ = 1/4 + x/4 · (x ± 2 cos θ)
//! ```

use thiserror::Error;

use crate::config::PhysicalConstants;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("entanglement rate {omega_sum:e} rad/s has the wrong sign for the {branch} witness")]
    WrongSignBranch { omega_sum: f64, branch: &'static str },
    #[error("arcsin argument {0} lies outside [-1, 1]")]
    ArcsinDomain(f64),
    #[error("target witness unreachable: required squared width {0:e} m² is negative or undefined")]
    NoSolution(f64),
    #[error("target witness {0} is below the -1/2 floor")]
    TargetOutOfRange(f64),
}

/// The four eigenvalues of the partially transposed two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenQuad {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
}

impl EigenQuad {
    pub fn as_array(&self) -> [f64; 4] {
        [self.lambda1, self.lambda2, self.lambda3, self.lambda4]
    }

    pub fn min(&self) -> f64 {
        self.as_array().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

pub fn pt_eigenvalues(omega_sum: f64, gamma: f64, tau: f64) -> EigenQuad {
    let x = (-gamma * tau).exp();
    let half_phase = omega_sum * tau / 2.0;
    let (sin, cos) = half_phase.sin_cos();
    EigenQuad {
        lambda1: 0.25 - 0.25 * x * (x - 2.0 * sin),
        lambda2: 0.25 - 0.25 * x * (x + 2.0 * sin),
        lambda3: 0.25 + 0.25 * x * (x + 2.0 * cos),
        lambda4: 0.25 + 0.25 * x * (x - 2.0 * cos),
    }
}

/// `λ₁`, the witness for the parallel setup where `ω₁ + ω₂ ≤ 0`.
pub fn witness_parallel(omega_sum: f64, gamma: f64, tau: f64) -> Result<f64, ClosedFormError> {
    if omega_sum > 0.0 {
        return Err(ClosedFormError::WrongSignBranch {
            omega_sum,
            branch: "parallel",
        });
    }
    Ok(pt_eigenvalues(omega_sum, gamma, tau).lambda1)
}

/// `λ₂`, the witness for the linear setup where `ω₁ + ω₂ ≥ 0`.
pub fn witness_linear(omega_sum: f64, gamma: f64, tau: f64) -> Result<f64, ClosedFormError> {
    if omega_sum < 0.0 {
        return Err(ClosedFormError::WrongSignBranch {
            omega_sum,
            branch: "linear",
        });
    }
    Ok(pt_eigenvalues(omega_sum, gamma, tau).lambda2)
}

/// Parallel two-qubit setup without the superposition width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthProblem {
    pub mass: f64,
    pub d_min: f64,
    pub tau: f64,
    pub gamma: f64,
    pub constants: PhysicalConstants,
}

/// Width `Δx` at which the parallel witness equals `target_w`.
///
/// Inverts `λ₁`: `sin θ = e^{γτ}(4W − 1 + e^{−2γτ})/2` on the principal
/// arcsin branch, then `1/r = 1/d_min + θħ/(Gm²τ)` for the mixed-branch
/// distance `r = √(d_min² + Δx²)`. `Δx²` is formed as `(r − d)(r + d)` so it
/// stays accurate when `Δx ≪ d_min`.
pub fn required_delta_x(target_w: f64, problem: &WidthProblem) -> Result<f64, ClosedFormError> {
    if target_w.is_nan() || target_w < -0.5 {
        return Err(ClosedFormError::TargetOutOfRange(target_w));
    }
    let gt = problem.gamma * problem.tau;
    let x = (-gt).exp();
    let sin_theta = 0.5 * (4.0 * target_w - 1.0 + x * x) / x;
    if !(-1.0..=1.0).contains(&sin_theta) {
        return Err(ClosedFormError::ArcsinDomain(sin_theta));
    }
    let theta = sin_theta.asin();

    // r = d·k/(k + c) with k = Gm²τ, c = d·ħ·θ; r − d = −d·c/(k + c).
    let d = problem.d_min;
    let k = problem.constants.g * problem.mass * problem.mass * problem.tau;
    let c = d * problem.constants.hbar * theta;
    let denom = k + c;
    if denom.is_nan() || denom <= 0.0 {
        return Err(ClosedFormError::NoSolution(f64::NAN));
    }
    let excess = -d * c / denom;
    let r = d + excess;
    let dx_sqr = excess * (r + d);
    if dx_sqr.is_nan() || dx_sqr < 0.0 {
        return Err(ClosedFormError::NoSolution(dx_sqr));
    }
    Ok(dx_sqr.sqrt())
}
