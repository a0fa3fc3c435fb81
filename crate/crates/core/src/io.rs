//! The shared matrix file format: a JSON document with fields `n`,
//! `mode` ("float" or "rational"), and `entries` as a row-major array.
//! Rational entries are strings like "3/4" and round-trip bit-exactly.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::matrix::Matrix;
use crate::rational::{rational_from_str, rational_to_string, RationalMatrix};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed matrix file: {0}")]
    Parse(String),
    #[error(transparent)]
    Math(#[from] crate::error::Error),
}

/// A matrix as stored on disk: either float or exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    Float(Matrix),
    Rational(RationalMatrix),
}

impl MatrixData {
    pub fn dim(&self) -> usize {
        match self {
            MatrixData::Float(m) => m.nrows(),
            MatrixData::Rational(m) => m.dim(),
        }
    }

    pub fn to_float(&self) -> Matrix {
        match self {
            MatrixData::Float(m) => m.clone(),
            MatrixData::Rational(m) => {
                Matrix::from_row_slice(m.dim(), m.dim(), &m.to_f64())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MatrixData::Float(m) => {
                let n = m.nrows();
                let entries: Vec<Value> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| json!(m[(i, j)])))
                    .collect();
                json!({ "n": n, "mode": "float", "entries": entries })
            }
            MatrixData::Rational(m) => {
                let entries: Vec<Value> = m
                    .entries()
                    .iter()
                    .map(|r| json!(rational_to_string(r)))
                    .collect();
                json!({ "n": m.dim(), "mode": "rational", "entries": entries })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, FileError> {
        let obj = v
            .as_object()
            .ok_or_else(|| FileError::Parse("expected a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| FileError::Parse("missing or non-integer field \"n\"".into()))?
            as usize;
        let mode = obj
            .get("mode")
            .and_then(Value::as_str)
            .ok_or_else(|| FileError::Parse("missing field \"mode\"".into()))?;
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| FileError::Parse("missing array field \"entries\"".into()))?;
        if entries.len() != n * n {
            return Err(FileError::Parse(format!(
                "expected {} entries for n = {n}, found {}",
                n * n,
                entries.len()
            )));
        }
        match mode {
            "float" => {
                let mut vals = Vec::with_capacity(n * n);
                for e in entries {
                    let x = e.as_f64().ok_or_else(|| {
                        FileError::Parse(format!("non-numeric float entry {e}"))
                    })?;
                    if !x.is_finite() {
                        return Err(FileError::Parse(format!("non-finite entry {x}")));
                    }
                    vals.push(x);
                }
                Ok(MatrixData::Float(Matrix::from_row_slice(n, n, &vals)))
            }
            "rational" => {
                let mut vals = Vec::with_capacity(n * n);
                for e in entries {
                    let s = e.as_str().ok_or_else(|| {
                        FileError::Parse(format!(
                            "rational entries must be strings, found {e}"
                        ))
                    })?;
                    vals.push(rational_from_str(s).map_err(|err| {
                        FileError::Parse(format!("bad rational \"{s}\": {err}"))
                    })?);
                }
                Ok(MatrixData::Rational(RationalMatrix::from_entries(n, vals)))
            }
            other => Err(FileError::Parse(format!(
                "unknown mode \"{other}\" (expected \"float\" or \"rational\")"
            ))),
        }
    }
}

pub fn read_matrix(path: &Path) -> Result<MatrixData, FileError> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| FileError::Parse(format!("invalid JSON: {e}")))?;
    MatrixData::from_json(&v)
}

pub fn write_matrix(path: &Path, data: &MatrixData) -> Result<(), FileError> {
    let text = serde_json::to_string_pretty(&data.to_json()).expect("serializable");
    fs::write(path, text + "\n")?;
    Ok(())
}
