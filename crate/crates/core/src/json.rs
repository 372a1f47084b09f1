//! JSON schemas shared by the CLI: matrices, vectors, coefficient sequences,
//! operator families, group specifications and semigroup samples.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major
//! `{"rows": m, "cols": n, "data": [[re,im], ...]}`. Every loader validates
//! shape and finiteness before handing data to the numeric layer.

use crate::gamma::{BanachSpaceDesc, OperatorFamily};
use crate::group::GroupSpec;
use crate::num::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, JsonError> {
        let data: Vec<Complex64> = self.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
            .map_err(|e| JsonError::Invalid(e.to_string()))
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub data: Vec<[f64; 2]>,
}

impl VectorJson {
    pub fn to_vector(&self) -> Result<Vec<Complex64>, JsonError> {
        if self.data.is_empty() {
            return Err(JsonError::Invalid("vector must be nonempty".into()));
        }
        let v: Vec<Complex64> = self.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(JsonError::Invalid("entries must be finite".into()));
        }
        Ok(v)
    }

    pub fn from_vector(v: &[Complex64]) -> Self {
        Self { data: v.iter().map(|z| [z.re, z.im]).collect() }
    }
}

/// Coefficient list for sequences and polynomials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffsJson {
    pub coeffs: Vec<[f64; 2]>,
}

impl CoeffsJson {
    pub fn to_vector(&self) -> Result<Vec<Complex64>, JsonError> {
        VectorJson { data: self.coeffs.clone() }.to_vector()
    }
}

/// Exponent p as a number or the string "inf".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentJson {
    Number(f64),
    Word(String),
}

impl ExponentJson {
    pub fn to_p(&self) -> Result<f64, JsonError> {
        match self {
            ExponentJson::Number(p) if *p >= 1.0 => Ok(*p),
            ExponentJson::Number(p) => Err(JsonError::Invalid(format!("p = {p} must be ≥ 1"))),
            ExponentJson::Word(w) if w == "inf" => Ok(f64::INFINITY),
            ExponentJson::Word(w) => Err(JsonError::Invalid(format!("unknown exponent {w:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub p: ExponentJson,
    pub d: usize,
    pub ops: Vec<MatrixJson>,
}

impl FamilyJson {
    pub fn to_family(&self) -> Result<OperatorFamily, JsonError> {
        if self.d == 0 {
            return Err(JsonError::Invalid("dimension must be ≥ 1".into()));
        }
        if self.ops.is_empty() {
            return Err(JsonError::Invalid("family must contain at least one operator".into()));
        }
        let space = BanachSpaceDesc::new(self.p.to_p()?, self.d);
        let mut ops = Vec::with_capacity(self.ops.len());
        for m in &self.ops {
            let mat = m.to_matrix()?;
            if mat.rows() != self.d || mat.cols() != self.d {
                return Err(JsonError::Invalid(format!(
                    "operator is {}×{}, expected {}×{}",
                    mat.rows(),
                    mat.cols(),
                    self.d,
                    self.d
                )));
            }
            ops.push(mat);
        }
        Ok(OperatorFamily::new(space, ops))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

impl GroupJson {
    pub fn to_spec(&self) -> Result<GroupSpec, JsonError> {
        let need_n = || {
            self.n.ok_or_else(|| JsonError::Invalid(format!("kind {:?} needs field n", self.kind)))
        };
        match self.kind.as_str() {
            "cyclic" => Ok(GroupSpec::Cyclic(need_n()?)),
            "dihedral" => Ok(GroupSpec::Dihedral(need_n()?)),
            "symmetric" => Ok(GroupSpec::Symmetric(need_n()?)),
            "table" => self
                .table
                .clone()
                .map(GroupSpec::Explicit)
                .ok_or_else(|| JsonError::Invalid("kind \"table\" needs field table".into())),
            other => Err(JsonError::Invalid(format!("unknown group kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub generator: MatrixJson,
    pub delta: f64,
    #[serde(rename = "N")]
    pub n: usize,
}
