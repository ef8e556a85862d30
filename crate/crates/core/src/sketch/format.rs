//! `scjl-matrix-v1` JSON persistence.
//!
//! ```json
//! {"format":"scjl-matrix-v1","kind":"sign_consistent","n":2,"m":4,"s":2,"seed":7,
//!  "columns":[{"rows":[0,3],"sign":1},{"rows":[1,2],"sign":-1}]}
//! ```
//!
//! Sparse JL matrices use `"kind":"sparse_jl"` and a `"signs"` array per
//! column instead of `"sign"`. Rows are stored sorted.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::matrix::{Sign, SignConsistentMatrix, SparseJlMatrix, SparseSketch};
use super::params::SketchParams;
use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "scjl-matrix-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    SignConsistent,
    SparseJl,
}

/// Either matrix family, as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    SignConsistent(SignConsistentMatrix),
    SparseJl(SparseJlMatrix),
}

impl AnyMatrix {
    pub fn kind(&self) -> MatrixKind {
        match self {
            AnyMatrix::SignConsistent(_) => MatrixKind::SignConsistent,
            AnyMatrix::SparseJl(_) => MatrixKind::SparseJl,
        }
    }

    pub fn as_sketch(&self) -> &dyn SparseSketch {
        match self {
            AnyMatrix::SignConsistent(a) => a,
            AnyMatrix::SparseJl(a) => a,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            AnyMatrix::SignConsistent(a) => a.seed(),
            AnyMatrix::SparseJl(a) => a.seed(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_doc())?)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, &self.to_doc())?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        Self::from_doc(serde_json::from_reader(r)?)
    }

    fn to_doc(&self) -> MatrixDoc {
        let a = self.as_sketch();
        let p = a.params();
        let columns = (0..p.n())
            .map(|i| {
                let rows = a.rows(i).to_vec();
                match self {
                    AnyMatrix::SignConsistent(m) => ColumnDoc {
                        rows,
                        sign: Some(m.sign(i).as_i8()),
                        signs: None,
                    },
                    AnyMatrix::SparseJl(m) => ColumnDoc {
                        rows,
                        sign: None,
                        signs: Some(m.signs(i).iter().map(|s| s.as_i8()).collect()),
                    },
                }
            })
            .collect();
        MatrixDoc {
            format: FORMAT_TAG.to_string(),
            kind: self.kind(),
            n: p.n(),
            m: p.m(),
            s: p.s(),
            seed: self.seed(),
            columns,
        }
    }

    fn from_doc(doc: MatrixDoc) -> Result<Self> {
        if doc.format != FORMAT_TAG {
            return Err(Error::Format(format!(
                "unsupported format tag `{}`, expected `{FORMAT_TAG}`",
                doc.format
            )));
        }
        let params = SketchParams::new(doc.n, doc.m, doc.s).map_err(|e| Error::Format(e.to_string()))?;
        let sign = |i: usize, v: i8| {
            Sign::try_from_i64(v as i64)
                .ok_or_else(|| Error::Format(format!("column {i}: sign must be 1 or -1, got {v}")))
        };
        match doc.kind {
            MatrixKind::SignConsistent => {
                let columns = doc
                    .columns
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if c.signs.is_some() {
                            return Err(Error::Format(format!(
                                "column {i}: sign-consistent columns carry a single `sign`"
                            )));
                        }
                        let v = c
                            .sign
                            .ok_or_else(|| Error::Format(format!("column {i}: missing `sign`")))?;
                        Ok((c.rows, sign(i, v)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyMatrix::SignConsistent(SignConsistentMatrix::from_columns(
                    params, doc.seed, columns,
                )?))
            }
            MatrixKind::SparseJl => {
                let columns = doc
                    .columns
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if c.sign.is_some() {
                            return Err(Error::Format(format!(
                                "column {i}: sparse JL columns carry a `signs` array"
                            )));
                        }
                        let v = c
                            .signs
                            .ok_or_else(|| Error::Format(format!("column {i}: missing `signs`")))?;
                        let signs = v.into_iter().map(|s| sign(i, s)).collect::<Result<Vec<_>>>()?;
                        Ok((c.rows, signs))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyMatrix::SparseJl(SparseJlMatrix::from_columns(
                    params, doc.seed, columns,
                )?))
            }
        }
    }
}

impl From<SignConsistentMatrix> for AnyMatrix {
    fn from(a: SignConsistentMatrix) -> Self {
        AnyMatrix::SignConsistent(a)
    }
}

impl From<SparseJlMatrix> for AnyMatrix {
    fn from(a: SparseJlMatrix) -> Self {
        AnyMatrix::SparseJl(a)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    format: String,
    kind: MatrixKind,
    n: usize,
    m: usize,
    s: usize,
    seed: Option<u64>,
    columns: Vec<ColumnDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColumnDoc {
    rows: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    sign: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    signs: Option<Vec<i8>>,
}
