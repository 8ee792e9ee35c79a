//! Matrix and graph file formats.
//!
//! Matrices are JSON objects tagged by `kind`:
//!
//! ```json
//! {"kind": "tridiagonal", "diag": [1, 2.1, 1], "offdiag": [1, 1]}
//! {"kind": "pentadiagonal", "diag": [1, 2, 2, 1, 1], "second": [1, 1, 1]}
//! {"kind": "dense", "rows": [[1, 0.5], [0.5, 1]]}
//! ```
//!
//! Graphs use the edge-list text format of [`SimpleGraph::parse_edge_list`].

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bandmat::{BandSymMatrix, DenseSymMatrix, HadamardPower, SymMatrix};
use crate::error::{Error, Result};
use crate::format::round_sig;
use crate::graphs::SimpleGraph;
use crate::positivity::Shiftable;

/// Wire form of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatrixJson {
    Tridiagonal { diag: Vec<f64>, offdiag: Vec<f64> },
    Pentadiagonal { diag: Vec<f64>, second: Vec<f64> },
    Dense { rows: Vec<Vec<f64>> },
}

/// A parsed matrix in whichever storage its file used.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Band(BandSymMatrix),
    Dense(DenseSymMatrix),
}

impl AnyMatrix {
    pub fn as_band(&self) -> Option<&BandSymMatrix> {
        match self {
            Self::Band(b) => Some(b),
            Self::Dense(_) => None,
        }
    }

    /// Tridiagonal or pentadiagonal form, when the file declared one.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Band(b) if b.is_tridiagonal() => "tridiagonal",
            Self::Band(b) if b.is_penta_form() => "pentadiagonal",
            Self::Band(_) => "band",
            Self::Dense(_) => "dense",
        }
    }
}

impl From<BandSymMatrix> for AnyMatrix {
    fn from(b: BandSymMatrix) -> Self {
        Self::Band(b)
    }
}

impl From<DenseSymMatrix> for AnyMatrix {
    fn from(d: DenseSymMatrix) -> Self {
        Self::Dense(d)
    }
}

impl SymMatrix for AnyMatrix {
    fn order(&self) -> usize {
        match self {
            Self::Band(b) => b.order(),
            Self::Dense(d) => d.order(),
        }
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::Band(b) => b.entry(i, j),
            Self::Dense(d) => d.entry(i, j),
        }
    }

    fn to_dense(&self) -> DenseSymMatrix {
        match self {
            Self::Band(b) => b.to_dense(),
            Self::Dense(d) => d.clone(),
        }
    }

    fn max_norm(&self) -> f64 {
        match self {
            Self::Band(b) => b.max_norm(),
            Self::Dense(d) => d.max_norm(),
        }
    }

    fn as_tridiagonal(&self) -> Option<(&[f64], &[f64])> {
        match self {
            Self::Band(b) => b.as_tridiagonal(),
            Self::Dense(_) => None,
        }
    }
}

impl HadamardPower for AnyMatrix {
    fn hadamard_power_of(&self, r: f64) -> Result<Self> {
        Ok(match self {
            Self::Band(b) => Self::Band(b.hadamard_power(r)?),
            Self::Dense(d) => Self::Dense(d.hadamard_power(r)?),
        })
    }
}

impl Shiftable for AnyMatrix {
    fn shifted_by(&self, delta: f64) -> Self {
        match self {
            Self::Band(b) => Self::Band(b.shifted(delta)),
            Self::Dense(d) => Self::Dense(d.shifted(delta)),
        }
    }
}

impl MatrixJson {
    pub fn into_matrix(self) -> Result<AnyMatrix> {
        Ok(match self {
            Self::Tridiagonal { diag, offdiag } => BandSymMatrix::tridiagonal(diag, offdiag)?.into(),
            Self::Pentadiagonal { diag, second } => BandSymMatrix::pentadiagonal(diag, second)?.into(),
            Self::Dense { rows } => DenseSymMatrix::from_rows(rows)?.into(),
        })
    }
}

impl From<&AnyMatrix> for MatrixJson {
    fn from(a: &AnyMatrix) -> Self {
        match a {
            AnyMatrix::Band(b) if b.is_tridiagonal() => Self::Tridiagonal {
                diag: b.diag().to_vec(),
                offdiag: b.offdiag(1).to_vec(),
            },
            AnyMatrix::Band(b) if b.is_penta_form() && b.order() >= 3 => Self::Pentadiagonal {
                diag: b.diag().to_vec(),
                second: b.second().to_vec(),
            },
            other => Self::Dense {
                rows: other.to_dense().rows(),
            },
        }
    }
}

impl From<&BandSymMatrix> for MatrixJson {
    fn from(b: &BandSymMatrix) -> Self {
        Self::from(&AnyMatrix::Band(b.clone()))
    }
}

impl From<&DenseSymMatrix> for MatrixJson {
    fn from(d: &DenseSymMatrix) -> Self {
        Self::from(&AnyMatrix::Dense(d.clone()))
    }
}

/// Parses matrix JSON text. Syntax and schema problems (unknown `kind`,
/// unknown fields, non-numeric entries) become [`Error::Parse`]; shape
/// problems keep their structural variant.
pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let wire: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    wire.into_matrix()
}

pub fn read_matrix_file(path: &Path) -> Result<AnyMatrix> {
    parse_matrix(&read_text(path)?)
}

pub fn read_graph_file(path: &Path) -> Result<SimpleGraph> {
    SimpleGraph::parse_edge_list(&read_text(path)?)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Matrix JSON with every entry rounded to the output precision.
pub fn matrix_to_json(a: &AnyMatrix) -> Value {
    round_floats(serde_json::to_value(MatrixJson::from(a)).expect("matrix serializes"))
}

/// Rounds every floating-point number inside `v` to the output precision;
/// integers are left untouched.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}
