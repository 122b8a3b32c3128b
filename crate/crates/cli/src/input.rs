//! Parsing of operator names, basis presets, number lists and JSON matrix files.

use std::path::Path;

use num_complex::Complex;
use serde_json::Value;
use wvexp_core::hilbert::{exclusive_pair, gell_mann_matrices, pauli_matrices, rotated_operator, rotated_pair, spin_one_matrices};
use wvexp_core::{BasisPair, CMatrix, HermitianOperator, RMatrix};

use crate::CliError;

/// Angle in radians: a float, or `pi` with an optional integer multiplier and
/// divisor (`pi`, `pi/3`, `2pi/3`, `-pi/2`).
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(format!("angle {s:?} is not finite")) };
    }
    let bad = || format!("cannot read angle {s:?}; use radians, e.g. 0.7 or pi/3");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coeff = match num.trim().strip_suffix("pi").map(|c| c.trim().trim_end_matches('*')) {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(c) => c.parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(coeff * std::f64::consts::PI / den)
}

/// A decimal or a `p/q` fraction.
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let bad = || CliError::Input(format!("cannot read number {s:?}"));
    let x = match t.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.trim().parse::<f64>().map_err(|_| bad())?, q.trim().parse::<f64>().map_err(|_| bad())?);
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(parse_number).collect()
}

/// Comma-separated indices.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Input(format!("cannot read index {t:?}"))))
        .collect()
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json_f64(v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| CliError::Input(format!("{what}: expected a number, got {v}")))
}

fn json_complex(v: &Value) -> Result<Complex<f64>, CliError> {
    match v {
        Value::Object(m) => {
            let re = m.get("re").map(|x| json_f64(x, "re")).transpose()?.unwrap_or(0.0);
            let im = m.get("im").map(|x| json_f64(x, "im")).transpose()?.unwrap_or(0.0);
            if m.keys().any(|k| k != "re" && k != "im") {
                return Err(CliError::Input(format!("unexpected key in complex entry {v}")));
            }
            Ok(Complex::new(re, im))
        }
        Value::Number(_) => Ok(Complex::new(json_f64(v, "entry")?, 0.0)),
        _ => Err(CliError::Input(format!("expected {{\"re\", \"im\"}} entry, got {v}"))),
    }
}

fn json_rows<E>(v: &Value, entry: impl Fn(&Value) -> Result<E, CliError>) -> Result<Vec<Vec<E>>, CliError> {
    let rows = v.as_array().ok_or_else(|| CliError::Input("matrix must be an array of rows".into()))?;
    let out: Vec<Vec<E>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| CliError::Input("matrix row must be an array".into()))?
                .iter()
                .map(&entry)
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = out.len();
    if n == 0 || out.iter().any(|r| r.len() != n) {
        return Err(CliError::Input("matrix must be square and nonempty".into()));
    }
    Ok(out)
}

/// Square complex matrix, row-major, entries `{"re": .., "im": ..}`.
pub fn complex_matrix(v: &Value) -> Result<CMatrix<f64>, CliError> {
    Ok(CMatrix::from_rows(&json_rows(v, json_complex)?)?)
}

/// Square real matrix, row-major.
pub fn real_matrix_file(path: &Path) -> Result<RMatrix<f64>, CliError> {
    Ok(RMatrix::from_rows(&json_rows(&read_json(path)?, |x| json_f64(x, "entry"))?)?)
}

/// Named operator, or `file:<path>` holding a complex matrix.
///
/// Names: `sigma_x|y|z`, `sigma_theta`, `L_x|y|z`, `L_theta`, `gellmann_1`
/// .. `gellmann_8`, `identity` (sized by `dim`).
pub fn operator(name: &str, theta: f64, dim: usize) -> Result<HermitianOperator<f64>, CliError> {
    if let Some(path) = name.strip_prefix("file:") {
        return Ok(HermitianOperator::new(complex_matrix(&read_json(Path::new(path))?)?)?);
    }
    let [sx, sy, sz] = pauli_matrices();
    let [lx, ly, lz] = spin_one_matrices();
    let op = match name {
        "sigma_x" => sx,
        "sigma_y" => sy,
        "sigma_z" => sz,
        "sigma_theta" => rotated_operator(2, theta)?,
        "L_x" => lx,
        "L_y" => ly,
        "L_z" => lz,
        "L_theta" => rotated_operator(3, theta)?,
        "identity" => HermitianOperator::identity(dim),
        _ => {
            let k = name
                .strip_prefix("gellmann_")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| (1..=8).contains(k))
                .ok_or_else(|| CliError::Input(format!("unknown operator {name:?}")))?;
            gell_mann_matrices()[k - 1].clone()
        }
    };
    Ok(op)
}

/// `exclusive2`, `rotated2`, `rotated3`, or `file:<path>` with
/// `{"pre": M, "post": M}` whose columns are the basis vectors.
pub fn basis(name: &str, theta: f64) -> Result<BasisPair<f64>, CliError> {
    if let Some(path) = name.strip_prefix("file:") {
        let v = read_json(Path::new(path))?;
        let side = |key: &str| -> Result<CMatrix<f64>, CliError> {
            complex_matrix(v.get(key).ok_or_else(|| CliError::Input(format!("basis file lacks {key:?}")))?)
        };
        return Ok(BasisPair::from_columns(&side("pre")?, &side("post")?)?);
    }
    match name {
        "exclusive2" => Ok(exclusive_pair()),
        "rotated2" => Ok(rotated_pair(2, theta)?),
        "rotated3" => Ok(rotated_pair(3, theta)?),
        _ => Err(CliError::Input(format!("unknown basis {name:?}"))),
    }
}
