//! Versioned JSON documents for the core types.
//!
//! Four document kinds, each tagged by a `schema` field:
//!
//! * `"ncomplex/1"` — a finite-window N-complex together with its field
//!   context: `{schema, context: {N, p, q}, lo, hi, dims, diff}`, where
//!   `diff` maps each degree `n` (as a decimal string, `lo+1 ≤ n ≤ hi`) to
//!   the flat row-major entries of `d : C_n → C_{n−1}`.
//! * `"simplicial/1"` — a simplicial module as per-level face matrices (and
//!   optional degeneracy matrices), mirroring the N-complex conventions.
//! * `"algebra/1"` — a finite dimensional algebra by structure constants:
//!   `{schema, p, dim, unit, mult}` with `mult[i][j]` the coordinate vector
//!   of the basis product `e_i e_j`.
//! * `"module/1"` — a one-sided module over an embedded algebra document:
//!   `{schema, algebra, dim, side, action}` with one flat row-major
//!   `dim × dim` matrix per algebra basis element.
//!
//! Matrices are flat row-major entry lists; shapes are implied by the
//! surrounding dimension data.  Entries must already be reduced modulo `p`,
//! so every value has exactly one accepted spelling and serialization is the
//! inverse of parsing, byte for byte.  Parsing reruns the full mathematical
//! validation (`d^N = 0`, simplicial identities, associativity, module
//! axioms); a well-formed document that encodes broken data is rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derived::{DerivedError, FDModule, Side};
use crate::hochschild::{FinDimAlgebra, HochschildError};
use crate::linalg::FMatrix;
use crate::ncomplex::{ComplexError, NComplex};
use crate::qcalc::{QContext, QcalcError};
use crate::simplicial::{SimplicialError, SimplicialModule};

pub const NCOMPLEX_SCHEMA: &str = "ncomplex/1";
pub const SIMPLICIAL_SCHEMA: &str = "simplicial/1";
pub const ALGEBRA_SCHEMA: &str = "algebra/1";
pub const MODULE_SCHEMA: &str = "module/1";

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error("wrong schema tag: want {want:?}, got {got:?}")]
    WrongSchema { want: &'static str, got: String },
    #[error("entry {value} is not reduced modulo {modulus}")]
    EntryOutOfRange { value: u64, modulus: u64 },
    #[error("matrix for {what} has {got} entries, want {want}")]
    EntryCount {
        what: String,
        want: usize,
        got: usize,
    },
    #[error("window [{lo}, {hi}] does not match {dims} stored dimensions")]
    WindowMismatch { lo: i64, hi: i64, dims: usize },
    #[error("missing differential for degree {0}")]
    MissingDegree(i64),
    #[error("unexpected differential key {0:?}")]
    UnknownDegree(String),
    #[error("declared dimension {declared} does not match the data ({got})")]
    DimMismatch { declared: usize, got: usize },
    #[error("invalid field context")]
    Scalar(#[from] QcalcError),
    #[error("complex validation failed")]
    Complex(#[from] ComplexError),
    #[error("simplicial validation failed")]
    Simplicial(#[from] SimplicialError),
    #[error("algebra validation failed")]
    Algebra(#[from] HochschildError),
    #[error("module validation failed")]
    Module(#[from] DerivedError),
}

/// The field context `{N, p, q}` of a deformed complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDoc {
    #[serde(rename = "N")]
    pub order: u32,
    pub p: u64,
    pub q: u64,
}

/// Serialized form of an [`NComplex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NComplexDoc {
    pub schema: String,
    pub context: ContextDoc,
    pub lo: i64,
    pub hi: i64,
    pub dims: Vec<usize>,
    pub diff: BTreeMap<String, Vec<u64>>,
}

/// Serialized form of a [`SimplicialModule`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialDoc {
    pub schema: String,
    pub p: u64,
    pub dims: Vec<usize>,
    /// `faces[n]` lists `d_0, …, d_n` at level `n`; level 0 is empty.
    pub faces: Vec<Vec<Vec<u64>>>,
    /// `degeneracies[n]` lists `s_0, …, s_n` at level `n`, for levels
    /// `0, …, top−1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracies: Option<Vec<Vec<Vec<u64>>>>,
}

/// Serialized form of a [`FinDimAlgebra`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub schema: String,
    pub p: u64,
    pub dim: usize,
    pub unit: Vec<u64>,
    /// `mult[i][j]` is the coordinate vector of `e_i e_j`.
    pub mult: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideDoc {
    Left,
    Right,
}

/// Serialized form of an [`FDModule`], with the algebra embedded so the
/// document is self-contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub schema: String,
    pub algebra: AlgebraDoc,
    pub dim: usize,
    pub side: SideDoc,
    /// One flat row-major `dim × dim` matrix per algebra basis element.
    pub action: Vec<Vec<u64>>,
}

fn encode_matrix(m: &FMatrix) -> Vec<u64> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m.get(i, j));
        }
    }
    out
}

fn decode_matrix(
    what: &str,
    rows: usize,
    cols: usize,
    entries: &[u64],
    p: u64,
) -> Result<FMatrix, SchemaError> {
    if entries.len() != rows * cols {
        return Err(SchemaError::EntryCount {
            what: what.to_string(),
            want: rows * cols,
            got: entries.len(),
        });
    }
    for &e in entries {
        if e >= p {
            return Err(SchemaError::EntryOutOfRange {
                value: e,
                modulus: p,
            });
        }
    }
    Ok(FMatrix::from_fn(rows, cols, p, |i, j| entries[i * cols + j]))
}

fn expect_schema(want: &'static str, got: &str) -> Result<(), SchemaError> {
    if got == want {
        Ok(())
    } else {
        Err(SchemaError::WrongSchema {
            want,
            got: got.to_string(),
        })
    }
}

/// Render any document deterministically (two-space indented JSON).
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize infallibly");
    s.push('\n');
    s
}

pub fn ncomplex_doc(c: &NComplex) -> NComplexDoc {
    let mut diff = BTreeMap::new();
    for n in (c.lo() + 1)..=c.hi() {
        diff.insert(n.to_string(), encode_matrix(&c.diff(n)));
    }
    NComplexDoc {
        schema: NCOMPLEX_SCHEMA.to_string(),
        context: ContextDoc {
            order: c.order(),
            p: c.modulus(),
            q: c.context().q(),
        },
        lo: c.lo(),
        hi: c.hi(),
        dims: c.dims().to_vec(),
        diff,
    }
}

pub fn ncomplex_from_doc(doc: &NComplexDoc) -> Result<NComplex, SchemaError> {
    expect_schema(NCOMPLEX_SCHEMA, &doc.schema)?;
    let ctx = QContext::new(doc.context.order, doc.context.p, doc.context.q)?;
    if doc.hi != doc.lo + doc.dims.len() as i64 - 1 || doc.dims.is_empty() {
        return Err(SchemaError::WindowMismatch {
            lo: doc.lo,
            hi: doc.hi,
            dims: doc.dims.len(),
        });
    }
    for key in doc.diff.keys() {
        match key.parse::<i64>() {
            Ok(n) if n > doc.lo && n <= doc.hi => {}
            _ => return Err(SchemaError::UnknownDegree(key.clone())),
        }
    }
    let mut diffs = Vec::with_capacity(doc.dims.len().saturating_sub(1));
    for n in (doc.lo + 1)..=doc.hi {
        let entries = doc
            .diff
            .get(&n.to_string())
            .ok_or(SchemaError::MissingDegree(n))?;
        let rows = doc.dims[(n - 1 - doc.lo) as usize];
        let cols = doc.dims[(n - doc.lo) as usize];
        diffs.push(decode_matrix(
            &format!("degree {n}"),
            rows,
            cols,
            entries,
            doc.context.p,
        )?);
    }
    Ok(NComplex::new(ctx, doc.lo, doc.dims.clone(), diffs)?)
}

pub fn ncomplex_to_json(c: &NComplex) -> String {
    to_json(&ncomplex_doc(c))
}

pub fn ncomplex_from_json(s: &str) -> Result<NComplex, SchemaError> {
    ncomplex_from_doc(&serde_json::from_str(s)?)
}

pub fn simplicial_doc(sm: &SimplicialModule) -> SimplicialDoc {
    let top = sm.top();
    let mut faces = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let count = if n == 0 { 0 } else { n + 1 };
        faces.push((0..count).map(|i| encode_matrix(sm.face(n, i))).collect());
    }
    let degeneracies = if sm.has_degeneracies() {
        let mut ls = Vec::with_capacity(top);
        for n in 0..top {
            ls.push(
                (0..=n)
                    .map(|i| encode_matrix(sm.degeneracy(n, i).expect("validated degeneracy")))
                    .collect(),
            );
        }
        Some(ls)
    } else {
        None
    };
    SimplicialDoc {
        schema: SIMPLICIAL_SCHEMA.to_string(),
        p: sm.modulus(),
        dims: sm.dims().to_vec(),
        faces,
        degeneracies,
    }
}

pub fn simplicial_from_doc(doc: &SimplicialDoc) -> Result<SimplicialModule, SchemaError> {
    expect_schema(SIMPLICIAL_SCHEMA, &doc.schema)?;
    if doc.faces.len() != doc.dims.len() {
        return Err(SchemaError::DimMismatch {
            declared: doc.dims.len(),
            got: doc.faces.len(),
        });
    }
    let mut faces = Vec::with_capacity(doc.faces.len());
    for (n, level) in doc.faces.iter().enumerate() {
        let mut fs = Vec::with_capacity(level.len());
        for (i, entries) in level.iter().enumerate() {
            let rows = if n == 0 { 0 } else { doc.dims[n - 1] };
            fs.push(decode_matrix(
                &format!("face {i} at level {n}"),
                rows,
                doc.dims[n],
                entries,
                doc.p,
            )?);
        }
        faces.push(fs);
    }
    let degeneracies = match &doc.degeneracies {
        None => None,
        Some(levels) => {
            let mut out = Vec::with_capacity(levels.len());
            for (n, level) in levels.iter().enumerate() {
                let mut ss = Vec::with_capacity(level.len());
                for (i, entries) in level.iter().enumerate() {
                    let rows = doc.dims.get(n + 1).copied().unwrap_or(0);
                    ss.push(decode_matrix(
                        &format!("degeneracy {i} at level {n}"),
                        rows,
                        doc.dims[n],
                        entries,
                        doc.p,
                    )?);
                }
                out.push(ss);
            }
            Some(out)
        }
    };
    Ok(SimplicialModule::new(
        doc.p,
        doc.dims.clone(),
        faces,
        degeneracies,
    )?)
}

pub fn simplicial_to_json(sm: &SimplicialModule) -> String {
    to_json(&simplicial_doc(sm))
}

pub fn simplicial_from_json(s: &str) -> Result<SimplicialModule, SchemaError> {
    simplicial_from_doc(&serde_json::from_str(s)?)
}

pub fn algebra_doc(a: &FinDimAlgebra) -> AlgebraDoc {
    let d = a.dim();
    let mult = (0..d)
        .map(|i| (0..d).map(|j| a.basis_product(i, j).to_vec()).collect())
        .collect();
    AlgebraDoc {
        schema: ALGEBRA_SCHEMA.to_string(),
        p: a.modulus(),
        dim: d,
        unit: a.unit().to_vec(),
        mult,
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<FinDimAlgebra, SchemaError> {
    expect_schema(ALGEBRA_SCHEMA, &doc.schema)?;
    if doc.mult.len() != doc.dim {
        return Err(SchemaError::DimMismatch {
            declared: doc.dim,
            got: doc.mult.len(),
        });
    }
    for coords in std::iter::once(&doc.unit).chain(doc.mult.iter().flatten()) {
        for &e in coords {
            if e >= doc.p {
                return Err(SchemaError::EntryOutOfRange {
                    value: e,
                    modulus: doc.p,
                });
            }
        }
    }
    Ok(FinDimAlgebra::new(
        doc.p,
        doc.unit.clone(),
        doc.mult.clone(),
    )?)
}

pub fn algebra_to_json(a: &FinDimAlgebra) -> String {
    to_json(&algebra_doc(a))
}

pub fn algebra_from_json(s: &str) -> Result<FinDimAlgebra, SchemaError> {
    algebra_from_doc(&serde_json::from_str(s)?)
}

pub fn module_doc(m: &FDModule) -> ModuleDoc {
    ModuleDoc {
        schema: MODULE_SCHEMA.to_string(),
        algebra: algebra_doc(m.algebra()),
        dim: m.dim(),
        side: match m.side() {
            Side::Left => SideDoc::Left,
            Side::Right => SideDoc::Right,
        },
        action: (0..m.algebra().dim())
            .map(|i| encode_matrix(m.action(i)))
            .collect(),
    }
}

pub fn module_from_doc(doc: &ModuleDoc) -> Result<FDModule, SchemaError> {
    expect_schema(MODULE_SCHEMA, &doc.schema)?;
    let algebra = algebra_from_doc(&doc.algebra)?;
    let mut action = Vec::with_capacity(doc.action.len());
    for (i, entries) in doc.action.iter().enumerate() {
        action.push(decode_matrix(
            &format!("action of basis element {i}"),
            doc.dim,
            doc.dim,
            entries,
            doc.algebra.p,
        )?);
    }
    let side = match doc.side {
        SideDoc::Left => Side::Left,
        SideDoc::Right => Side::Right,
    };
    Ok(FDModule::new(&algebra, side, action)?)
}

pub fn module_to_json(m: &FDModule) -> String {
    to_json(&module_doc(m))
}

pub fn module_from_json(s: &str) -> Result<FDModule, SchemaError> {
    module_from_doc(&serde_json::from_str(s)?)
}
