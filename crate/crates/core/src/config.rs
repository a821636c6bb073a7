//! Experiment configuration, physical constants and the JSON config format.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::units::{format_si, parse_quantity, Dimension, UnitError};

/// Newton's constant and the reduced Planck constant (CODATA 2018).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Gravitational constant, m³·kg⁻¹·s⁻².
    #[serde(rename = "G")]
    pub g: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        g: 6.67430e-11,
        hbar: 1.054571817e-34,
    };

    /// `G m² / ħ`, the coupling in rad·m/s that multiplies every inverse distance.
    pub fn coupling(&self, mass: f64) -> f64 {
        self.g * mass * mass / self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Arrangement of the interferometers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Two superpositions perpendicular to the line joining the masses.
    Parallel2,
    /// Two superpositions co-linear with the separation axis.
    Linear2,
    /// Three parallel superpositions in a row, neighbours `d_min` apart.
    Parallel3,
    /// Three parallel superpositions on an equilateral triangle of edge `d_min`.
    Triangle3,
}

impl Geometry {
    pub const ALL: [Geometry; 4] = [
        Geometry::Parallel2,
        Geometry::Linear2,
        Geometry::Parallel3,
        Geometry::Triangle3,
    ];

    pub fn n_qubits(self) -> usize {
        match self {
            Geometry::Parallel2 | Geometry::Linear2 => 2,
            Geometry::Parallel3 | Geometry::Triangle3 => 3,
        }
    }

    pub fn dim(self) -> usize {
        1 << self.n_qubits()
    }

    pub fn label(self) -> &'static str {
        match self {
            Geometry::Parallel2 => "parallel2",
            Geometry::Linear2 => "linear2",
            Geometry::Parallel3 => "parallel3",
            Geometry::Triangle3 => "triangle3",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Geometry {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Geometry::ALL
            .into_iter()
            .find(|g| g.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ConfigError::UnknownGeometry(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("mass must be positive, got {0} kg")]
    NonPositiveMass(f64),
    #[error("d_min must be positive, got {0} m")]
    NonPositiveSeparation(f64),
    #[error("delta_x must be non-negative, got {0} m")]
    NegativeWidth(f64),
    #[error("tau must be positive, got {0} s")]
    NonPositiveTime(f64),
    #[error("gamma must be non-negative, got {0} Hz")]
    NegativeDecoherence(f64),
    #[error("expert constants must be positive and finite")]
    InvalidConstants,
    #[error("unknown geometry `{0}` (expected parallel2, linear2, parallel3 or triangle3)")]
    UnknownGeometry(String),
    #[error("field `{field}`: {source}")]
    Quantity {
        field: &'static str,
        #[source]
        source: UnitError,
    },
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("field `{field}`: {message}")]
    InvalidField { field: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl ConfigError {
    /// Name of the offending config field, where there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::NonPositiveMass(_) => Some("mass"),
            ConfigError::NonPositiveSeparation(_) => Some("d_min"),
            ConfigError::NegativeWidth(_) => Some("delta_x"),
            ConfigError::NonPositiveTime(_) => Some("tau"),
            ConfigError::NegativeDecoherence(_) => Some("gamma"),
            ConfigError::InvalidConstants => Some("expert"),
            ConfigError::UnknownGeometry(_) => Some("geometry"),
            ConfigError::Quantity { field, .. } | ConfigError::MissingField(field) => Some(field),
            ConfigError::InvalidField { field, .. } => Some(field),
            ConfigError::Json(_) => None,
        }
    }
}

/// A single experiment. All quantities are SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Mass of each test particle, kg.
    pub mass: f64,
    /// Minimal separation between superposition instances of different masses, m.
    pub d_min: f64,
    /// Spatial superposition width, m.
    pub delta_x: f64,
    /// Hold time, s.
    pub tau: f64,
    /// Total decoherence rate, Hz.
    pub gamma: f64,
    pub geometry: Geometry,
    pub constants: PhysicalConstants,
}

impl ExperimentConfig {
    pub fn new(
        geometry: Geometry,
        mass: f64,
        d_min: f64,
        delta_x: f64,
        tau: f64,
        gamma: f64,
    ) -> Self {
        Self {
            mass,
            d_min,
            delta_x,
            tau,
            gamma,
            geometry,
            constants: PhysicalConstants::CODATA,
        }
    }

    pub fn with_delta_x(self, delta_x: f64) -> Self {
        Self { delta_x, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_geometry(self, geometry: Geometry) -> Self {
        Self { geometry, ..self }
    }

    /// Check every field invariant and hand the config back unchanged.
    pub fn validate(self) -> Result<Self, ConfigError> {
        // `!(x > 0)` also rejects NaN.
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(ConfigError::NonPositiveMass(self.mass));
        }
        if !(self.d_min > 0.0 && self.d_min.is_finite()) {
            return Err(ConfigError::NonPositiveSeparation(self.d_min));
        }
        if !(self.delta_x >= 0.0 && self.delta_x.is_finite()) {
            return Err(ConfigError::NegativeWidth(self.delta_x));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(ConfigError::NonPositiveTime(self.tau));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(ConfigError::NegativeDecoherence(self.gamma));
        }
        let c = self.constants;
        if !(c.g > 0.0 && c.g.is_finite() && c.hbar > 0.0 && c.hbar.is_finite()) {
            return Err(ConfigError::InvalidConstants);
        }
        Ok(self)
    }

    /// Parse the JSON config format and validate the result.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| ConfigError::Json("top level must be an object".into()))?;
        Self::from_json_map(obj)?.validate()
    }

    pub(crate) fn from_json_map(obj: &Map<String, Value>) -> Result<Self, ConfigError> {
        let geometry = match obj.get("geometry") {
            Some(Value::String(s)) => s.parse()?,
            Some(other) => return Err(ConfigError::UnknownGeometry(other.to_string())),
            None => return Err(ConfigError::MissingField("geometry")),
        };
        Ok(Self {
            mass: required_quantity(obj, "mass", Dimension::Mass)?,
            d_min: required_quantity(obj, "d_min", Dimension::Length)?,
            delta_x: required_quantity(obj, "delta_x", Dimension::Length)?,
            tau: required_quantity(obj, "tau", Dimension::Time)?,
            gamma: required_quantity(obj, "gamma", Dimension::Frequency)?,
            geometry,
            constants: parse_expert(obj)?,
        })
    }

    /// JSON form with every quantity written as an SI-suffixed string.
    ///
    /// The `expert` section only appears when the constants differ from CODATA.
    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("mass".into(), format_si(self.mass, Dimension::Mass).into());
        obj.insert("d_min".into(), format_si(self.d_min, Dimension::Length).into());
        obj.insert(
            "delta_x".into(),
            format_si(self.delta_x, Dimension::Length).into(),
        );
        obj.insert("tau".into(), format_si(self.tau, Dimension::Time).into());
        obj.insert(
            "gamma".into(),
            format_si(self.gamma, Dimension::Frequency).into(),
        );
        obj.insert("geometry".into(), self.geometry.label().into());
        if self.constants != PhysicalConstants::CODATA {
            obj.insert(
                "expert".into(),
                serde_json::to_value(self.constants).expect("constants serialize"),
            );
        }
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("config serializes")
    }
}

/// Read `field` as a quantity; JSON numbers are taken as SI values.
pub(crate) fn quantity_field(
    obj: &Map<String, Value>,
    field: &'static str,
    dim: Dimension,
) -> Result<Option<f64>, ConfigError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => parse_quantity(s, dim)
            .map(Some)
            .map_err(|source| ConfigError::Quantity { field, source }),
        Some(Value::Number(n)) => Ok(n.as_f64()),
        Some(other) => Err(ConfigError::InvalidField {
            field: field.to_string(),
            message: format!("expected a quantity string, got {other}"),
        }),
    }
}

pub(crate) fn required_quantity(
    obj: &Map<String, Value>,
    field: &'static str,
    dim: Dimension,
) -> Result<f64, ConfigError> {
    quantity_field(obj, field, dim)?.ok_or(ConfigError::MissingField(field))
}

pub(crate) fn parse_expert(obj: &Map<String, Value>) -> Result<PhysicalConstants, ConfigError> {
    match obj.get("expert") {
        None | Some(Value::Null) => Ok(PhysicalConstants::CODATA),
        Some(Value::Object(expert)) => {
            let mut constants = PhysicalConstants::CODATA;
            for (key, value) in expert {
                let v = value.as_f64().ok_or_else(|| ConfigError::InvalidField {
                    field: format!("expert.{key}"),
                    message: "expected a number".into(),
                })?;
                match key.as_str() {
                    "G" => constants.g = v,
                    "hbar" => constants.hbar = v,
                    _ => {
                        return Err(ConfigError::InvalidField {
                            field: format!("expert.{key}"),
                            message: "unknown constant (expected G or hbar)".into(),
                        })
                    }
                }
            }
            Ok(constants)
        }
        Some(_) => Err(ConfigError::InvalidField {
            field: "expert".into(),
            message: "expected an object".into(),
        }),
    }
}
