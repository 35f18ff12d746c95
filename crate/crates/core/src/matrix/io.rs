//! Matrix text formats.
//!
//! JSON: an array of rows, each an array of `[re, im]` pairs.
//! CSV: one row per line, comma-separated tokens such as `1`, `-2.5j`, `1+2j`, `3e-1-4j`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ComplexMatrix, MatrixError};

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(pair).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

impl ComplexMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MatrixError> {
        serde_json::from_str(text).map_err(|e| MatrixError::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self, MatrixError> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(',')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        ComplexMatrix::from_rows(&rows)
    }

    /// JSON when the text starts with `[`, CSV otherwise.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        if text.trim_start().starts_with('[') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }
}

/// Parses `a`, `bj`, `a+bj` or `a-bj` (`i` is accepted for `j`).
pub fn parse_complex(token: &str) -> Result<Complex64, MatrixError> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || MatrixError::Parse(format!("bad complex token {token:?}"));
    let real = |s: &str| match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad()),
    };
    // A bare `j` or `-j` carries an implicit unit coefficient.
    let coeff = |s: &str| match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s),
    };
    let Some(body) = t.strip_suffix('j').or_else(|| t.strip_suffix('i')) else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    // Split before the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(Complex64::new(real(&body[..i])?, coeff(&body[i..])?)),
        None => Ok(Complex64::new(0.0, coeff(body)?)),
    }
}

pub fn vector_to_json(v: &[Complex64]) -> String {
    serde_json::to_string(&v.iter().copied().map(pair).collect::<Vec<_>>())
        .expect("vector serializes")
}

/// A vector as JSON `[[re, im], ...]`, or as CSV tokens on one or more lines.
pub fn parse_vector(text: &str) -> Result<Vec<Complex64>, MatrixError> {
    let v: Vec<Complex64> = if text.trim_start().starts_with('[') {
        let pairs: Vec<[f64; 2]> =
            serde_json::from_str(text).map_err(|e| MatrixError::Parse(e.to_string()))?;
        pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect()
    } else {
        text.split([',', '\n'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_complex)
            .collect::<Result<_, _>>()?
    };
    if v.is_empty() {
        return Err(MatrixError::Empty);
    }
    if let Some(i) = v
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(MatrixError::NonFinite { row: i, col: 0 });
    }
    Ok(v)
}
