//! Angle literals shared by the circuit format and the command line.
//!
//! An angle is either a plain decimal literal (`0.3`, `-1.5e-2`) or a
//! multiple of π: `pi`, `-pi/2`, `3pi/4`, `2*pi/3`, `0.5π`.

use std::f64::consts::{PI, TAU};
use std::fmt;

/// Failure to read an angle literal. `column` is 1-based within the literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for AngleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for AngleError {}

fn err(column: usize, message: impl Into<String>) -> AngleError {
    AngleError {
        column,
        message: message.into(),
    }
}

fn parse_number(text: &str, column: usize) -> Result<f64, AngleError> {
    let value: f64 = text
        .parse()
        .map_err(|_| err(column, format!("expected a number, found `{text}`")))?;
    // `inf` and `nan` parse as f64 but are not angles
    if !value.is_finite() || text.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return Err(err(column, format!("expected a finite number, found `{text}`")));
    }
    Ok(value)
}

/// Parses an angle in radians.
pub fn parse_radians(text: &str) -> Result<f64, AngleError> {
    let trimmed = text.trim_start();
    let lead = text.len() - trimmed.len();
    let body = trimmed.trim_end();
    if body.is_empty() {
        return Err(err(lead + 1, "empty angle"));
    }

    let pi_at = body
        .find("pi")
        .map(|i| (i, 2))
        .or_else(|| body.find('π').map(|i| (i, 'π'.len_utf8())));
    let Some((at, width)) = pi_at else {
        return parse_number(body, lead + 1);
    };

    let (head, rest) = (&body[..at], &body[at + width..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => parse_number(head, lead + 1)?,
    };

    let denominator = if rest.is_empty() {
        1.0
    } else if let Some(den) = rest.strip_prefix('/') {
        let column = lead + at + width + 2;
        let d = parse_number(den, column)?;
        if d == 0.0 {
            return Err(err(column, "division by zero"));
        }
        d
    } else {
        return Err(err(lead + at + width + 1, format!("unexpected `{rest}` after pi")));
    };

    Ok(coefficient * PI / denominator)
}

/// Reduces a phase into `[0, 2π)`.
pub fn canonical_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_and_pi_expressions() {
        assert_eq!(parse_radians("0").unwrap(), 0.0);
        assert_eq!(parse_radians("0.3").unwrap(), 0.3);
        assert_eq!(parse_radians("-1.5e-2").unwrap(), -1.5e-2);
        assert_eq!(parse_radians("pi").unwrap(), PI);
        assert_eq!(parse_radians("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_radians("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_radians("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_radians("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_radians(" 0.5π ").unwrap(), 0.5 * PI);
        assert_eq!(parse_radians("2pi").unwrap(), TAU);
    }

    #[test]
    fn rejects_garbage_with_column() {
        let e = parse_radians("banana").unwrap_err();
        assert_eq!(e.column, 1);
        assert!(parse_radians("pi/0").is_err());
        assert!(parse_radians("inf").is_err());
        assert!(parse_radians("nan").is_err());
        let e = parse_radians("3pi+1").unwrap_err();
        assert_eq!(e.column, 4);
        assert!(parse_radians("").is_err());
    }

    #[test]
    fn canonical_range() {
        assert_eq!(canonical_phase(-1e-20), 0.0);
        assert_eq!(canonical_phase(TAU), 0.0);
        assert!((canonical_phase(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        for k in -20..20 {
            let r = canonical_phase(k as f64 * 0.77);
            assert!((0.0..TAU).contains(&r));
        }
    }
}
