//! Grid scans over (γ, Δx) and the minimal-width search.
//!
//! The witness oscillates in Δx once the accumulated entangling phase passes
//! π/2, so the width search only looks below the width where
//! `|Σω·τ/2| = π/2` and returns the smallest crossing there.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use rayon::prelude::*;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::closedform;
use crate::config::{
    parse_expert, quantity_field, required_quantity, ConfigError, ExperimentConfig, Geometry,
    PhysicalConstants,
};
use crate::geometry;
use crate::quantum::{self, Bipartition, QuantumError};
use crate::units::{format_si, Dimension};

/// Bisection stops once the bracket is this narrow (m).
pub const WIDTH_TOLERANCE: f64 = 1e-9;
/// Two-qubit scans recompute every n-th point through the numeric pipeline.
pub const SPOT_CHECK_STRIDE: usize = 50;
/// Allowed gap between closed form and numeric spot checks.
pub const SPOT_CHECK_TOLERANCE: f64 = 1e-9;
/// Samples used to locate the first crossing before bisecting.
const BRACKET_SAMPLES: usize = 96;
/// The bracket search starts this far below the upper width bound.
const BRACKET_DYNAMIC_RANGE: f64 = 1e-7;

pub const GRID_CSV_HEADER: &str = "geometry,mass_kg,d_min_m,tau_s,gamma_hz,delta_x_m,witness";
pub const CURVE_CSV_HEADER: &str =
    "geometry,mass_kg,d_min_m,tau_s,gamma_hz,min_delta_x_m,status";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("invalid scan spec: {field}: {message}")]
    InvalidSpec { field: String, message: String },
    #[error(
        "no crossing of witness {target} below Δx = {searched_to:e} m at γ = {gamma:e} Hz \
         (lowest witness {min_witness})"
    )]
    NoCrossing {
        gamma: f64,
        target: f64,
        min_witness: f64,
        searched_to: f64,
    },
    #[error("closed form and numeric witness disagree by {gap:e} at grid point {index}")]
    OracleMismatch { index: usize, gap: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl ScanError {
    fn spec(field: &str, message: impl Into<String>) -> Self {
        ScanError::InvalidSpec {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// One scan axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Spacing {
    pub fn label(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points, spacing: Spacing::Linear }
    }

    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points, spacing: Spacing::Log }
    }

    fn validate(&self, field: &str) -> Result<(), ScanError> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(ScanError::spec(field, format!("need lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.points < 2 {
            return Err(ScanError::spec(field, "need at least 2 points"));
        }
        if self.lo < 0.0 {
            return Err(ScanError::spec(field, "axis values must be non-negative"));
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err(ScanError::spec(field, "log spacing needs lo > 0"));
        }
        Ok(())
    }

    fn to_json_value(self, dim: Dimension) -> Value {
        serde_json::json!({
            "lo": format_si(self.lo, dim),
            "hi": format_si(self.hi, dim),
            "points": self.points,
            "spacing": self.spacing.label(),
        })
    }

    /// Grid values, ascending, with both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == last {
                    return self.hi;
                }
                let t = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.lo + (self.hi - self.lo) * t,
                    Spacing::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// A (γ, Δx) grid for one geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub geometry: Geometry,
    pub mass: f64,
    pub d_min: f64,
    pub tau: f64,
    pub constants: PhysicalConstants,
    pub gamma: Axis,
    pub delta_x: Axis,
    pub target_w: f64,
    pub bipartition: Option<Bipartition>,
}

impl ScanSpec {
    /// Default axes: γ log-spaced over [1e-4, 1e-1] Hz with 200 points and
    /// Δx linear over [0, 10·d_min] with 400 points.
    pub fn new(geometry: Geometry, mass: f64, d_min: f64, tau: f64) -> Self {
        Self {
            geometry,
            mass,
            d_min,
            tau,
            constants: PhysicalConstants::CODATA,
            gamma: Axis::log(1e-4, 1e-1, 200),
            delta_x: Axis::linear(0.0, 10.0 * d_min, 400),
            target_w: 0.0,
            bipartition: None,
        }
    }

    /// Config at a grid point.
    pub fn config(&self, gamma: f64, delta_x: f64) -> ExperimentConfig {
        ExperimentConfig {
            mass: self.mass,
            d_min: self.d_min,
            delta_x,
            tau: self.tau,
            gamma,
            geometry: self.geometry,
            constants: self.constants,
        }
    }

    pub fn bipartition(&self) -> Bipartition {
        self.bipartition
            .unwrap_or_else(|| Bipartition::default_for(self.geometry.n_qubits()))
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        self.config(self.gamma.lo, self.delta_x.lo).validate()?;
        self.gamma.validate("gamma")?;
        self.delta_x.validate("delta_x")?;
        if !(self.target_w > -0.5 && self.target_w < 0.25) {
            return Err(ScanError::spec("target_w", "must lie in (-1/2, 1/4)"));
        }
        if let Some(b) = self.bipartition {
            if b.n_qubits() != self.geometry.n_qubits() {
                return Err(ScanError::spec("bipartition", format!("{b} does not fit {}", self.geometry)));
            }
        }
        Ok(())
    }

    /// JSON form readable by [`ScanSpec::from_json_str`], every quantity in SI.
    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("geometry".into(), self.geometry.label().into());
        obj.insert("mass".into(), format_si(self.mass, Dimension::Mass).into());
        obj.insert("d_min".into(), format_si(self.d_min, Dimension::Length).into());
        obj.insert("tau".into(), format_si(self.tau, Dimension::Time).into());
        obj.insert("gamma".into(), self.gamma.to_json_value(Dimension::Frequency));
        obj.insert("delta_x".into(), self.delta_x.to_json_value(Dimension::Length));
        obj.insert("target_w".into(), self.target_w.into());
        obj.insert("bipartition".into(), self.bipartition().to_string().into());
        if self.constants != PhysicalConstants::CODATA {
            obj.insert(
                "expert".into(),
                serde_json::to_value(self.constants).expect("constants serialize"),
            );
        }
        Value::Object(obj)
    }

    /// Parse the JSON scan-spec format. Axis sections and `target_w` are optional.
    pub fn from_json_str(text: &str) -> Result<Self, ScanError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| ConfigError::Json("top level must be an object".into()))?;
        let geometry: Geometry = match obj.get("geometry") {
            Some(Value::String(s)) => s.parse()?,
            Some(other) => return Err(ConfigError::UnknownGeometry(other.to_string()).into()),
            None => return Err(ConfigError::MissingField("geometry").into()),
        };
        let d_min = required_quantity(obj, "d_min", Dimension::Length)?;
        let mut spec = ScanSpec::new(
            geometry,
            required_quantity(obj, "mass", Dimension::Mass)?,
            d_min,
            required_quantity(obj, "tau", Dimension::Time)?,
        );
        spec.constants = parse_expert(obj)?;
        if let Some(axis) = obj.get("gamma") {
            spec.gamma = parse_axis(axis, "gamma", Dimension::Frequency, spec.gamma)?;
        }
        if let Some(axis) = obj.get("delta_x") {
            spec.delta_x = parse_axis(axis, "delta_x", Dimension::Length, spec.delta_x)?;
        }
        if let Some(t) = obj.get("target_w") {
            spec.target_w = t
                .as_f64()
                .ok_or_else(|| ScanError::spec("target_w", "expected a number"))?;
        }
        if let Some(b) = obj.get("bipartition") {
            let text = b
                .as_str()
                .ok_or_else(|| ScanError::spec("bipartition", "expected a string"))?;
            spec.bipartition = Some(Bipartition::parse(text, geometry.n_qubits())?);
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_axis(value: &Value, field: &'static str, dim: Dimension, default: Axis) -> Result<Axis, ScanError> {
    let obj: &Map<String, Value> = value
        .as_object()
        .ok_or_else(|| ScanError::spec(field, "expected an object with lo/hi/points"))?;
    let mut axis = default;
    // Reuse the quantity parser on the nested object.
    if let Some(lo) = quantity_field(obj, "lo", dim).map_err(|e| ScanError::spec(field, e.to_string()))? {
        axis.lo = lo;
    }
    if let Some(hi) = quantity_field(obj, "hi", dim).map_err(|e| ScanError::spec(field, e.to_string()))? {
        axis.hi = hi;
    }
    if let Some(points) = obj.get("points") {
        axis.points = points
            .as_u64()
            .ok_or_else(|| ScanError::spec(field, "points must be a positive integer"))?
            as usize;
    }
    if let Some(spacing) = obj.get("spacing") {
        axis.spacing = match spacing.as_str() {
            Some("log") => Spacing::Log,
            Some("linear") => Spacing::Linear,
            _ => return Err(ScanError::spec(field, "spacing must be \"log\" or \"linear\"")),
        };
    }
    Ok(axis)
}

/// Witness value for a config: closed form for two qubits, numeric otherwise.
pub fn witness_value(config: &ExperimentConfig, bipartition: Bipartition) -> Result<f64, ScanError> {
    if config.geometry.n_qubits() == 2 {
        let config = config.validate()?;
        let omega_sum = geometry::phases(&config).total_entangling_rate();
        Ok(closedform::pt_eigenvalues(omega_sum, config.gamma, config.tau).min())
    } else {
        Ok(quantum::witness_expectation_with(config, bipartition)?.lambda_min)
    }
}

/// One grid point of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub geometry: Geometry,
    pub mass: f64,
    pub d_min: f64,
    pub tau: f64,
    pub gamma: f64,
    pub delta_x: f64,
    pub witness: f64,
}

/// Witness at every grid point, γ-major then Δx ascending.
pub fn grid_scan(spec: &ScanSpec) -> Result<Vec<ScanRow>, ScanError> {
    spec.validate()?;
    let gammas = spec.gamma.values();
    let widths = spec.delta_x.values();
    let bipartition = spec.bipartition();
    let two_qubit = spec.geometry.n_qubits() == 2;
    let points: Vec<(usize, f64, f64)> = gammas
        .iter()
        .flat_map(|&g| widths.iter().map(move |&dx| (g, dx)))
        .enumerate()
        .map(|(i, (g, dx))| (i, g, dx))
        .collect();

    points
        .into_par_iter()
        .map(|(index, gamma, delta_x)| {
            let config = spec.config(gamma, delta_x);
            let witness = witness_value(&config, bipartition)?;
            if two_qubit && index % SPOT_CHECK_STRIDE == 0 {
                let numeric = quantum::witness_expectation_with(&config, bipartition)?.lambda_min;
                let gap = (numeric - witness).abs();
                if gap > SPOT_CHECK_TOLERANCE {
                    return Err(ScanError::OracleMismatch { index, gap });
                }
            }
            Ok(ScanRow {
                geometry: spec.geometry,
                mass: spec.mass,
                d_min: spec.d_min,
                tau: spec.tau,
                gamma,
                delta_x,
                witness,
            })
        })
        .collect()
}

/// Knobs for [`min_delta_x_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub bipartition: Option<Bipartition>,
    /// Upper width bound as a multiple of `d_min`, used when the phase cap
    /// lies beyond it.
    pub max_width_factor: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            bipartition: None,
            max_width_factor: 1e3,
        }
    }
}

/// Successful width search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    /// Smallest Δx (m) whose witness is at or below the target.
    pub delta_x: f64,
    /// Witness at `delta_x`.
    pub witness: f64,
    /// `|Σω·τ/2|` at `delta_x`; never above π/2.
    pub half_phase: f64,
    /// Width at which the search was capped.
    pub search_limit: f64,
}

fn half_phase(config: &ExperimentConfig) -> f64 {
    (geometry::phases(config).total_entangling_rate() * config.tau / 2.0).abs()
}

/// Width at which `|Σω·τ/2|` reaches π/2, or `limit` if it never does below it.
/// The entangling phase grows monotonically with Δx for every geometry here.
fn phase_cap(base: &ExperimentConfig, limit: f64) -> f64 {
    if half_phase(&base.with_delta_x(limit)) <= FRAC_PI_2 {
        return limit;
    }
    let (mut lo, mut hi) = (0.0, limit);
    for _ in 0..200 {
        if hi - lo <= hi * 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if half_phase(&base.with_delta_x(mid)) <= FRAC_PI_2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest Δx at which the witness reaches `target_w`, for decoherence `gamma`.
/// `base.delta_x` and `base.gamma` are ignored.
pub fn min_delta_x(base: &ExperimentConfig, gamma: f64, target_w: f64) -> Result<Threshold, ScanError> {
    min_delta_x_with(base, gamma, target_w, &SearchOptions::default())
}

pub fn min_delta_x_with(
    base: &ExperimentConfig,
    gamma: f64,
    target_w: f64,
    options: &SearchOptions,
) -> Result<Threshold, ScanError> {
    let base = base.with_gamma(gamma).with_delta_x(0.0).validate()?;
    if !(target_w > -0.5 && target_w < 0.25) {
        return Err(ScanError::spec("target_w", "must lie in (-1/2, 1/4)"));
    }
    let bipartition = options
        .bipartition
        .unwrap_or_else(|| Bipartition::default_for(base.geometry.n_qubits()));
    let witness = |dx: f64| witness_value(&base.with_delta_x(dx), bipartition);

    let limit = phase_cap(&base, options.max_width_factor * base.d_min);
    let found = |dx: f64, w: f64| Threshold {
        delta_x: dx,
        witness: w,
        half_phase: half_phase(&base.with_delta_x(dx)),
        search_limit: limit,
    };

    let w0 = witness(0.0)?;
    if w0 <= target_w {
        return Ok(found(0.0, w0));
    }

    // First sample at or below the target on a geometric grid up to the cap.
    let lo_sample = limit * BRACKET_DYNAMIC_RANGE;
    let ratio = (limit / lo_sample).powf(1.0 / (BRACKET_SAMPLES - 1) as f64);
    let mut lo = 0.0;
    let mut hi = None;
    let mut min_witness = w0;
    for i in 0..BRACKET_SAMPLES {
        let dx = if i == BRACKET_SAMPLES - 1 {
            limit
        } else {
            lo_sample * ratio.powi(i as i32)
        };
        let w = witness(dx)?;
        min_witness = min_witness.min(w);
        if w <= target_w {
            hi = Some((dx, w));
            break;
        }
        lo = dx;
    }
    let Some((mut hi, mut w_hi)) = hi else {
        return Err(ScanError::NoCrossing {
            gamma,
            target: target_w,
            min_witness,
            searched_to: limit,
        });
    };

    // Invariant: witness(lo) > target ≥ witness(hi).
    while hi - lo > WIDTH_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let w = witness(mid)?;
        if w <= target_w {
            hi = mid;
            w_hi = w;
        } else {
            lo = mid;
        }
    }
    Ok(found(hi, w_hi))
}

/// One point of a threshold curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub gamma: f64,
    /// `None` when the witness never reaches the target below the cap.
    pub threshold: Option<Threshold>,
}

/// Minimal width at every γ of the spec's gamma axis.
pub fn threshold_curve(spec: &ScanSpec) -> Result<Vec<CurvePoint>, ScanError> {
    spec.validate()?;
    let base = spec.config(spec.gamma.lo, 0.0);
    let options = SearchOptions {
        bipartition: spec.bipartition,
        ..SearchOptions::default()
    };
    spec.gamma
        .values()
        .into_par_iter()
        .map(|gamma| match min_delta_x_with(&base, gamma, spec.target_w, &options) {
            Ok(t) => Ok(CurvePoint { gamma, threshold: Some(t) }),
            Err(ScanError::NoCrossing { .. }) => Ok(CurvePoint { gamma, threshold: None }),
            Err(e) => Err(e),
        })
        .collect()
}

/// 17 significant digits, scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_grid_csv<W: Write>(rows: &[ScanRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{GRID_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.geometry,
            format_float(r.mass),
            format_float(r.d_min),
            format_float(r.tau),
            format_float(r.gamma),
            format_float(r.delta_x),
            format_float(r.witness),
        )?;
    }
    out.flush()
}

pub fn write_curve_csv<W: Write>(spec: &ScanSpec, points: &[CurvePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{CURVE_CSV_HEADER}")?;
    for p in points {
        let (dx, status) = match &p.threshold {
            Some(t) => (format_float(t.delta_x), "ok"),
            None => (String::new(), "no_crossing"),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            spec.geometry,
            format_float(spec.mass),
            format_float(spec.d_min),
            format_float(spec.tau),
            format_float(p.gamma),
            dx,
            status,
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        let lin = Axis::linear(0.0, 1.0, 5).values();
        assert_eq!(lin, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = Axis::log(1e-4, 1e-1, 4).values();
        assert_eq!(log[0], 1e-4);
        assert_eq!(log[3], 1e-1);
        assert!((log[1] - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn invalid_axes_are_rejected() {
        let mut spec = ScanSpec::new(Geometry::Parallel2, 1e-14, 35e-6, 1.0);
        spec.gamma = Axis::log(0.0, 1e-1, 10);
        assert!(spec.validate().is_err());
        spec.gamma = Axis::log(1e-1, 1e-2, 10);
        assert!(spec.validate().is_err());
        spec.gamma = Axis::linear(0.0, 1e-1, 1);
        assert!(spec.validate().is_err());
        spec.gamma = Axis::linear(0.0, 1e-1, 2);
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn small_grid_with_zero_entries() {
        let mut spec = ScanSpec::new(Geometry::Parallel2, 1e-14, 35e-6, 1.0);
        spec.gamma = Axis::linear(0.0, 1e-2, 2);
        spec.delta_x = Axis::linear(0.0, 5e-6, 2);
        let rows = grid_scan(&spec).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].gamma, rows[0].delta_x, rows[0].witness), (0.0, 0.0, 0.0));
        assert_eq!(rows[1].gamma, 0.0);
        assert_eq!(rows[2].delta_x, 0.0);
        assert!(rows[2].witness > 0.0);
        assert!(rows[3].witness < 0.0);
    }

    #[test]
    fn zero_target_at_zero_decoherence_needs_no_width() {
        let base = ExperimentConfig::new(Geometry::Parallel2, 1e-14, 35e-6, 0.0, 1.0, 0.0);
        let t = min_delta_x(&base, 0.0, 0.0).unwrap();
        assert_eq!(t.delta_x, 0.0);
    }

    #[test]
    fn no_crossing_under_heavy_decoherence() {
        let base = ExperimentConfig::new(Geometry::Parallel2, 1e-15, 35e-6, 0.0, 1.0, 0.0);
        match min_delta_x(&base, 10.0, 0.0) {
            Err(ScanError::NoCrossing { min_witness, .. }) => assert!(min_witness > 0.0),
            other => panic!("expected NoCrossing, got {other:?}"),
        }
    }

    #[test]
    fn phase_cap_binds_for_heavy_masses() {
        // 1e-12 kg accumulates far more than π/2 of phase at large widths.
        let base = ExperimentConfig::new(Geometry::Parallel2, 1e-12, 35e-6, 0.0, 1.0, 0.0);
        let cap = phase_cap(&base, 1e3 * base.d_min);
        assert!(cap < 1e3 * base.d_min);
        assert!((half_phase(&base.with_delta_x(cap)) - FRAC_PI_2).abs() < 1e-6);
        let t = min_delta_x(&base, 0.5, -0.1).unwrap();
        assert!(t.half_phase <= FRAC_PI_2);
    }

    #[test]
    fn csv_layout() {
        let row = ScanRow {
            geometry: Geometry::Linear2,
            mass: 1e-14,
            d_min: 35e-6,
            tau: 1.0,
            gamma: 1e-3,
            delta_x: 0.0,
            witness: -0.125,
        };
        let mut buf = Vec::new();
        write_grid_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "geometry,mass_kg,d_min_m,tau_s,gamma_hz,delta_x_m,witness\n\
             linear2,1.0000000000000000e-14,3.4999999999999997e-5,1.0000000000000000e0,\
             1.0000000000000000e-3,0.0000000000000000e0,-1.2500000000000000e-1\n"
        );
    }

    #[test]
    fn spec_json_defaults_and_overrides() {
        let spec = ScanSpec::from_json_str(
            r#"{"mass": "1e-14 kg", "d_min": "35 um", "tau": "1 s", "geometry": "parallel3",
                "delta_x": {"hi": "20 um", "points": 11}}"#,
        )
        .unwrap();
        assert_eq!(spec.gamma, Axis::log(1e-4, 1e-1, 200));
        assert_eq!(spec.delta_x, Axis::linear(0.0, 20e-6, 11));
        assert_eq!(spec.bipartition().to_string(), "13|2");

        let err = ScanSpec::from_json_str(
            r#"{"mass": "1e-14 kg", "d_min": "35 um", "tau": "1 s", "geometry": "parallel2",
                "gamma": {"lo": "1 Hz", "hi": "0.1 Hz"}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ScanError::InvalidSpec { ref field, .. } if field == "gamma"));
    }

    #[test]
    fn spec_json_round_trips() {
        let mut spec = ScanSpec::new(Geometry::Triangle3, 3e-15, 21e-6, 2.0);
        spec.gamma = Axis::linear(0.0, 0.2, 9);
        spec.target_w = -0.01;
        spec.bipartition = Some(Bipartition::new(3, 0).unwrap());
        let back = ScanSpec::from_json_str(&spec.to_json_value().to_string()).unwrap();
        assert_eq!(back, spec);
    }
}
