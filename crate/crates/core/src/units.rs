//! Parsing of suffixed physical quantities such as `"35 um"` or `"1e-3 Hz"`.
//!
//! The unit prefix is folded into the decimal exponent before the number is
//! converted to `f64`, so `"35 um"` parses to exactly the same bits as the
//! literal `35e-6`.

use std::fmt;

use thiserror::Error;

/// Physical dimension of a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Mass,
    Length,
    Time,
    Frequency,
}

impl Dimension {
    /// SI unit symbol used when formatting values of this dimension.
    pub fn si_symbol(self) -> &'static str {
        match self {
            Dimension::Mass => "kg",
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Frequency => "Hz",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Mass => "mass",
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Frequency => "frequency",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("empty quantity")]
    Empty,
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("unknown unit `{unit}` for a {expected} quantity")]
    UnknownUnit { unit: String, expected: Dimension },
    #[error("quantity is not finite: `{0}`")]
    NotFinite(String),
}

/// Decimal exponent of `unit` relative to the SI base unit of `dim`.
fn unit_exponent(dim: Dimension, unit: &str) -> Option<i32> {
    let exp = match (dim, unit) {
        (Dimension::Mass, "kg") => 0,
        (Dimension::Mass, "g") => -3,
        (Dimension::Mass, "mg") => -6,
        (Dimension::Mass, "ug" | "µg" | "μg") => -9,
        (Dimension::Mass, "ng") => -12,
        (Dimension::Length, "m") => 0,
        (Dimension::Length, "cm") => -2,
        (Dimension::Length, "mm") => -3,
        (Dimension::Length, "um" | "µm" | "μm") => -6,
        (Dimension::Length, "nm") => -9,
        (Dimension::Time, "s") => 0,
        (Dimension::Time, "ms") => -3,
        (Dimension::Time, "us" | "µs" | "μs") => -6,
        (Dimension::Frequency, "Hz") => 0,
        (Dimension::Frequency, "kHz") => 3,
        (Dimension::Frequency, "mHz") => -3,
        (Dimension::Frequency, "uHz" | "µHz" | "μHz") => -6,
        _ => return None,
    };
    Some(exp)
}

/// Split `"35um"` / `"35 um"` / `"1.5e-3 Hz"` into number and unit text.
fn split_number(text: &str) -> (&str, &str) {
    let bytes = text.as_bytes();
    let mut end = 0;
    while end < bytes.len() {
        let c = bytes[end];
        let is_exp = (c == b'e' || c == b'E')
            && end > 0
            && bytes[end - 1].is_ascii_digit()
            && bytes
                .get(end + 1)
                .is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+');
        if c.is_ascii_digit() || c == b'.' || c == b'+' || c == b'-' || is_exp {
            end += 1;
        } else {
            break;
        }
    }
    (&text[..end], text[end..].trim())
}

/// Parse a quantity of dimension `dim` and return its value in SI units.
///
/// A bare number without a unit is taken to be in SI units already.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, UnitError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(UnitError::Empty);
    }
    let (number, unit) = split_number(text);
    if number.is_empty() {
        return Err(UnitError::InvalidNumber(text.to_string()));
    }
    let shift = if unit.is_empty() {
        0
    } else {
        unit_exponent(dim, unit).ok_or_else(|| UnitError::UnknownUnit {
            unit: unit.to_string(),
            expected: dim,
        })?
    };

    let (mantissa, exponent) = match number.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = number[pos + 1..]
                .parse()
                .map_err(|_| UnitError::InvalidNumber(number.to_string()))?;
            (&number[..pos], exp)
        }
        None => (number, 0),
    };
    let value: f64 = format!("{mantissa}e{}", exponent + shift)
        .parse()
        .map_err(|_| UnitError::InvalidNumber(number.to_string()))?;
    if !value.is_finite() {
        return Err(UnitError::NotFinite(text.to_string()));
    }
    Ok(value)
}

/// Format an SI value so that [`parse_quantity`] reads back the identical `f64`.
pub fn format_si(value: f64, dim: Dimension) -> String {
    format!("{value:e} {}", dim.si_symbol())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn micrometres_are_exact() {
        assert_eq!(parse_quantity("35 um", Dimension::Length).unwrap(), 35e-6);
        assert_eq!(parse_quantity("35um", Dimension::Length).unwrap(), 35e-6);
        assert_eq!(parse_quantity("35 μm", Dimension::Length).unwrap(), 35e-6);
        assert_eq!(parse_quantity("1.5e-3 um", Dimension::Length).unwrap(), 1.5e-9);
    }

    #[test]
    fn other_dimensions() {
        assert_eq!(parse_quantity("1e-14 kg", Dimension::Mass).unwrap(), 1e-14);
        assert_eq!(parse_quantity("1e-14kg", Dimension::Mass).unwrap(), 1e-14);
        assert_eq!(parse_quantity("1 s", Dimension::Time).unwrap(), 1.0);
        assert_eq!(parse_quantity("1e-3 Hz", Dimension::Frequency).unwrap(), 1e-3);
        assert_eq!(parse_quantity("10 mHz", Dimension::Frequency).unwrap(), 10e-3);
        assert_eq!(parse_quantity("0.01", Dimension::Frequency).unwrap(), 0.01);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_quantity("  ", Dimension::Mass), Err(UnitError::Empty));
        assert!(matches!(
            parse_quantity("3 Hz", Dimension::Length),
            Err(UnitError::UnknownUnit { .. })
        ));
        assert!(matches!(
            parse_quantity("kg", Dimension::Mass),
            Err(UnitError::InvalidNumber(_))
        ));
        assert!(matches!(
            parse_quantity("1e999 kg", Dimension::Mass),
            Err(UnitError::NotFinite(_))
        ));
    }

    #[test]
    fn formatted_values_read_back() {
        for v in [1e-14, 35e-6, 3.5000000000000004e-5, 0.0, 1.0 / 3.0] {
            let s = format_si(v, Dimension::Length);
            assert_eq!(parse_quantity(&s, Dimension::Length).unwrap(), v);
        }
    }
}
