//! JSON documents for relations and banded models.
//!
//! Relation document: `{ "dim_x": n, "dim_y": m, "kind": "operator" |
//! "pencil" | "graph", "data": ... }` where `data` holds one matrix
//! (operator), a `[A, B]` pair (pencil), or a list of graph generator
//! vectors; complex entries are `[re, im]` pairs and matrices are row-major
//! nested arrays.
//!
//! Model document: `{ "space": "laurent" | "toeplitz", "symbol": {"k":
//! [re, im], ...} or {"num": {...}, "den": {...}}, "perturbation": [{"u": v,
//! "v": v}], "mv_part": [v], "restriction": [v] }` with sparse vectors `v`
//! given as lists of `[index, re, im]`. `restriction` is optional and only
//! produced by adjoint constructions.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::banded::{BandedModel, LaurentSymbol, SparseVec, SpaceKind};
use crate::error::{Error, Result};
use crate::relation::Relation;

type Cx = [f64; 2];

fn cx(v: Cx) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn uncx(c: Complex64) -> Cx {
    [c.re, c.im]
}

/// Serialized relation. `data` is kind-dependent; see the module docs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub dim_x: usize,
    pub dim_y: usize,
    pub kind: RelationKind,
    pub data: RelationData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Operator,
    Pencil,
    Graph,
}

/// Either one matrix (operator) or a list of matrices / generator vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationData {
    Matrix(Vec<Vec<Cx>>),
    List(Vec<Vec<Vec<Cx>>>),
}

fn to_matrix(rows: &[Vec<Cx>]) -> Result<DMatrix<Complex64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::InvalidInput("empty matrix in relation data".into()));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidInput("ragged matrix in relation data".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| cx(rows[i][j])))
}

impl RelationDoc {
    /// Build the relation, checking shapes against `dim_x`/`dim_y`.
    pub fn to_relation(&self, tol: f64) -> Result<Relation> {
        match (self.kind, &self.data) {
            (RelationKind::Operator, RelationData::Matrix(rows)) => {
                let a = to_matrix(rows)?;
                if a.nrows() != self.dim_y || a.ncols() != self.dim_x {
                    return Err(Error::Shape(format!(
                        "operator data is {}x{}, expected {}x{}",
                        a.nrows(),
                        a.ncols(),
                        self.dim_y,
                        self.dim_x
                    )));
                }
                Relation::from_operator(&a, tol)
            }
            (RelationKind::Pencil, RelationData::List(ms)) if ms.len() == 2 => {
                let a = to_matrix(&ms[0])?;
                let b = to_matrix(&ms[1])?;
                if a.nrows() != self.dim_y || b.nrows() != self.dim_x {
                    return Err(Error::Shape("pencil row counts do not match dims".into()));
                }
                Relation::from_pencil(&a, &b, tol)
            }
            (RelationKind::Graph, RelationData::List(vs)) => {
                let ambient = self.dim_x + self.dim_y;
                let gens: Vec<DVector<Complex64>> = vs
                    .iter()
                    .map(|v| {
                        let flat: Vec<Cx> = v.iter().flatten().copied().collect();
                        if flat.len() != ambient {
                            return Err(Error::Shape(format!(
                                "graph generator has length {}, expected {ambient}",
                                flat.len()
                            )));
                        }
                        Ok(DVector::from_iterator(ambient, flat.into_iter().map(cx)))
                    })
                    .collect::<Result<_>>()?;
                Relation::from_graph_generators(self.dim_x, self.dim_y, &gens, tol)
            }
            (RelationKind::Pencil, _) => {
                Err(Error::InvalidInput("pencil data must be a [A, B] pair".into()))
            }
            _ => Err(Error::InvalidInput(
                "relation data shape does not match kind".into(),
            )),
        }
    }

    /// Serialize a relation in graph form (the faithful representation).
    pub fn from_relation(rel: &Relation) -> RelationDoc {
        let frame = rel.graph().frame();
        let gens = (0..frame.ncols())
            .map(|j| frame.column(j).iter().map(|&c| vec![uncx(c)]).collect())
            .collect();
        RelationDoc {
            dim_x: rel.dim_x(),
            dim_y: rel.dim_y(),
            kind: RelationKind::Graph,
            data: RelationData::List(gens),
        }
    }
}

/// Serialized banded model; see the module docs for the layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub space: SpaceDoc,
    pub symbol: SymbolDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbation: Vec<PerturbationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mv_part: Vec<SparseVecDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restriction: Vec<SparseVecDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceDoc {
    Laurent,
    Toeplitz,
}

/// Coefficient maps keyed by the (stringified) band index.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolDoc {
    Rational {
        num: BTreeMap<String, Cx>,
        den: BTreeMap<String, Cx>,
    },
    Polynomial(BTreeMap<String, Cx>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationDoc {
    pub u: SparseVecDoc,
    pub v: SparseVecDoc,
}

/// Sparse vector as `[index, re, im]` triples.
pub type SparseVecDoc = Vec<(i64, f64, f64)>;

fn parse_coeffs(m: &BTreeMap<String, Cx>) -> Result<BTreeMap<i64, Complex64>> {
    m.iter()
        .map(|(k, &v)| {
            let idx: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad band index {k:?}")))?;
            Ok((idx, cx(v)))
        })
        .collect()
}

fn emit_coeffs(m: &BTreeMap<i64, Complex64>) -> BTreeMap<String, Cx> {
    m.iter().map(|(&k, &c)| (k.to_string(), uncx(c))).collect()
}

fn sparse_from_doc(doc: &SparseVecDoc) -> SparseVec {
    SparseVec::from_terms(doc)
}

fn sparse_to_doc(v: &SparseVec) -> SparseVecDoc {
    v.0.iter().map(|&(k, c)| (k, c.re, c.im)).collect()
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<BandedModel> {
        let symbol = match &self.symbol {
            SymbolDoc::Polynomial(m) => LaurentSymbol::from_coeffs(parse_coeffs(m)?)?,
            SymbolDoc::Rational { num, den } => {
                LaurentSymbol::rational(parse_coeffs(num)?, parse_coeffs(den)?)?
            }
        };
        let space = match self.space {
            SpaceDoc::Laurent => SpaceKind::Laurent,
            SpaceDoc::Toeplitz => SpaceKind::Toeplitz,
        };
        BandedModel::new(space, symbol)?
            .with_perturbation(
                self.perturbation
                    .iter()
                    .map(|p| (sparse_from_doc(&p.u), sparse_from_doc(&p.v)))
                    .collect(),
            )?
            .with_mv_part(self.mv_part.iter().map(sparse_from_doc).collect())?
            .with_restriction(self.restriction.iter().map(sparse_from_doc).collect())
    }

    pub fn from_model(model: &BandedModel) -> ModelDoc {
        let symbol = if model.symbol.is_polynomial() {
            SymbolDoc::Polynomial(emit_coeffs(model.symbol.numerator()))
        } else {
            SymbolDoc::Rational {
                num: emit_coeffs(model.symbol.numerator()),
                den: emit_coeffs(model.symbol.denominator()),
            }
        };
        ModelDoc {
            space: match model.space {
                SpaceKind::Laurent => SpaceDoc::Laurent,
                SpaceKind::Toeplitz => SpaceDoc::Toeplitz,
            },
            symbol,
            perturbation: model
                .perturbation
                .iter()
                .map(|(u, v)| PerturbationDoc {
                    u: sparse_to_doc(u),
                    v: sparse_to_doc(v),
                })
                .collect(),
            mv_part: model.mv_part.iter().map(sparse_to_doc).collect(),
            restriction: model.restriction.iter().map(sparse_to_doc).collect(),
        }
    }
}

/// Parse a relation document from JSON text.
pub fn relation_from_json(text: &str, tol: f64) -> Result<Relation> {
    let doc: RelationDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("relation JSON: {e}")))?;
    doc.to_relation(tol)
}

/// Serialize a relation to JSON text (graph form).
pub fn relation_to_json(rel: &Relation) -> String {
    serde_json::to_string(&RelationDoc::from_relation(rel)).expect("serialization cannot fail")
}

/// Parse a model document from JSON text.
pub fn model_from_json(text: &str) -> Result<BandedModel> {
    let doc: ModelDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("model JSON: {e}")))?;
    doc.to_model()
}

/// Serialize a model to JSON text.
pub fn model_to_json(model: &BandedModel) -> String {
    serde_json::to_string(&ModelDoc::from_model(model)).expect("serialization cannot fail")
}
