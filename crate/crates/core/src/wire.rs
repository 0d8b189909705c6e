// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Interchange formats: complex numbers as `[re, im]` pairs, matrices as
//! nested row arrays of those pairs, and fixed-significance number output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{Mat2, Mat4, C64};

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair(ComplexPair),
    Real(f64),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> C64 {
        match e {
            Entry::Pair([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

pub fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

/// Row-major `[[[re, im], ...], ...]`.
pub type MatrixJson = Vec<Vec<ComplexPair>>;

pub fn mat4_to_json(m: &Mat4) -> MatrixJson {
    (0..4).map(|r| (0..4).map(|col| pair(m[(r, col)])).collect()).collect()
}

pub fn mat2_to_json(m: &Mat2) -> MatrixJson {
    (0..2).map(|r| (0..2).map(|col| pair(m[(r, col)])).collect()).collect()
}

fn parse_rows(value: &serde_json::Value, n: usize) -> Result<Vec<C64>> {
    let rows: Vec<Vec<Entry>> = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidInput(format!("matrix must be a nested array of [re, im] pairs: {e}")))?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("expected a {n}x{n} matrix")));
    }
    let entries: Vec<C64> = rows.into_iter().flatten().map(C64::from).collect();
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix entries must be finite".into()));
    }
    Ok(entries)
}

pub fn mat4_from_json(value: &serde_json::Value) -> Result<Mat4> {
    let entries = parse_rows(value, 4)?;
    Ok(Mat4::from_row_slice(&entries))
}

pub fn mat2_from_json(value: &serde_json::Value) -> Result<Mat2> {
    let entries = parse_rows(value, 2)?;
    Ok(Mat2::from_row_slice(&entries))
}

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros removed, scientific notation outside `[1e-5, 10^digits)`.
pub fn fmt_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_significant(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(fmt_significant(-0.0, 12), "0");
        assert_eq!(fmt_significant(1.0, 12), "1");
        assert_eq!(fmt_significant(-0.5, 12), "-0.5");
        assert_eq!(fmt_significant(1.234e-7, 12), "1.234e-7");
        assert_eq!(fmt_significant(123456.0, 3), "1.23e5");
        assert_eq!(fmt_significant(0.000123, 12), "0.000123");
        assert_eq!(fmt_significant(99.99999999999999, 12), "100");
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = Mat4::from_fn(|r, c| C64::new(r as f64 - 0.5, c as f64 * 0.25));
        let v = serde_json::to_value(mat4_to_json(&m)).unwrap();
        assert_eq!(mat4_from_json(&v).unwrap(), m);
    }

    #[test]
    fn matrix_json_accepts_reals_and_rejects_shape() {
        let v: serde_json::Value = serde_json::from_str("[[1,0],[[0,1],0]]").unwrap();
        let m = mat2_from_json(&v).unwrap();
        assert_eq!(m[(1, 0)], C64::new(0.0, 1.0));
        let bad: serde_json::Value = serde_json::from_str("[[1,0,0],[0,1,0]]").unwrap();
        assert!(mat2_from_json(&bad).is_err());
        assert!(mat4_from_json(&bad).is_err());
    }
}
