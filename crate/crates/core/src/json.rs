//! JSON wire formats.
//!
//! Matrices travel as `{"rows": n, "cols": m, "re": [...], "im": [...]}` in
//! row-major order. Reports are written through [`to_fixed_json`], which
//! prints every float with 17 significant digits so that identical runs
//! produce byte-identical files.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{KreinError, Result};
use crate::linalg::{c, CMat};

/// Input files may also give a real matrix as nested rows, `[[1, 0], [0, -1]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr")]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        MatrixJson { rows, cols, re, im }
    }

    /// An empty `im` array is accepted as an all-real matrix.
    pub fn to_matrix(&self) -> Result<CMat> {
        let len = self.rows * self.cols;
        if self.re.len() != len {
            return Err(KreinError::Malformed(format!(
                "matrix {}x{} carries {} real entries",
                self.rows,
                self.cols,
                self.re.len()
            )));
        }
        if !self.im.is_empty() && self.im.len() != len {
            return Err(KreinError::Malformed(format!(
                "matrix {}x{} carries {} imaginary entries",
                self.rows,
                self.cols,
                self.im.len()
            )));
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err(KreinError::Malformed("non-finite matrix entry".into()));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            c(self.re[k], self.im.get(k).copied().unwrap_or(0.0))
        }))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Flat {
        rows: usize,
        cols: usize,
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
    Nested(Vec<Vec<f64>>),
}

impl TryFrom<MatrixRepr> for MatrixJson {
    type Error = String;

    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        match r {
            MatrixRepr::Flat { rows, cols, re, im } => Ok(MatrixJson { rows, cols, re, im }),
            MatrixRepr::Nested(rows) => {
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err("ragged nested matrix".into());
                }
                let n = rows.len();
                Ok(MatrixJson {
                    rows: n,
                    cols,
                    re: rows.concat(),
                    im: Vec::new(),
                })
            }
        }
    }
}

pub fn matrix_value(m: &CMat) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("matrix serializes")
}

/// Format a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // keeps -0.0 and 0.0 identical
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// Serialize a JSON value with fixed-precision floats and two-space indent.
pub fn to_fixed_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    out.push_str(&fmt_f64(x));
                } else {
                    out.push_str("null");
                }
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // numeric arrays stay on one line
            if items.iter().all(|x| x.is_number() || x.is_null()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(item, depth + 1, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                indent(depth + 1, out);
                write_value(item, depth + 1, out);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            let len = map.len();
            for (k, (key, item)) in map.iter().enumerate() {
                indent(depth + 1, out);
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push_str(": ");
                write_value(item, depth + 1, out);
                if k + 1 < len {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(depth, out);
            out.push('}');
        }
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}
