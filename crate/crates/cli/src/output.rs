//! Output documents: a JSON tree and a flat CSV table per command.
//!
//! Floats carry 17 significant digits so a 64-bit value survives a round trip.
//! Complex numbers are `{"re", "im"}` in JSON and `<name>_re`, `<name>_im`
//! column pairs in CSV.

use num_complex::Complex;
use serde_json::{Map, Number, Value};
use wvexp_core::{CMatrix, RMatrix};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Scientific notation with 16 digits after the point and a signed exponent.
/// Negative zero prints as zero.
pub fn fmt(x: f64) -> String {
    let s = format!("{:.16e}", x + 0.0);
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt(x).parse::<Number>().expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

pub fn complex(z: Complex<f64>) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn rmatrix(m: &RMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| reals(m.row(i))).collect())
}

pub fn cmatrix(m: &CMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array(m.row(i).iter().map(|&z| complex(z)).collect())).collect())
}

/// Ordered JSON object from key/value pairs.
pub fn object<const K: usize>(fields: [(&str, Value); K]) -> Value {
    Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

/// Flat table for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Document {
    pub json: Value,
    pub table: Table,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json).map_err(|e| CliError::Output(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Output(e.to_string());
                w.write_record(&self.table.headers).map_err(io)?;
                for r in &self.table.rows {
                    w.write_record(r).map_err(io)?;
                }
                w.into_inner().map_err(|e| CliError::Output(e.to_string()))
            }
        }
    }
}
