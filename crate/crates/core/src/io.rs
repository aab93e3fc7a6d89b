//! JSON documents for relations, forms, boundary data and graphs, and CSV writers.
//!
//! Matrices are row-major nested arrays. Entries are plain numbers when the
//! field is real and `[re, im]` pairs when it is complex; on input both
//! spellings are accepted. Infinite edge endpoints are the strings `"inf"` and
//! `"-inf"`. Floats are written in their shortest round-trip form, so emitted
//! documents parse back to identical values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::field::{CMatrix, Scalar, ScalarField, DEFAULT_TOL};
use crate::graph::{BoundarySpec, Edge, GraphError, MetricGraph, Shorthand};
use crate::linrel::{Flavor, LagrangianData, LinRelError, LinearRelation, SesquilinearForm, Subspace};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("invalid endpoint {0:?}; expected a number, \"inf\" or \"-inf\"")]
    Endpoint(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    LinRel(#[from] LinRelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, IoError>;

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// One matrix entry: a real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Real(f64),
    Complex([f64; 2]),
}

impl JsonScalar {
    pub fn new(z: Scalar, field: ScalarField) -> Self {
        match field {
            ScalarField::Real => JsonScalar::Real(z.re),
            ScalarField::Complex => JsonScalar::Complex([z.re, z.im]),
        }
    }

    pub fn value(self) -> Scalar {
        match self {
            JsonScalar::Real(x) => Scalar::new(x, 0.0),
            JsonScalar::Complex([x, y]) => Scalar::new(x, y),
        }
    }
}

/// A matrix as nested rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonMatrix(pub Vec<Vec<JsonScalar>>);

impl JsonMatrix {
    pub fn new(m: &CMatrix, field: ScalarField) -> Self {
        JsonMatrix(
            m.row_iter()
                .map(|row| row.iter().map(|&z| JsonScalar::new(z, field)).collect())
                .collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        for (row, r) in self.0.iter().enumerate() {
            if r.len() != cols {
                return Err(IoError::Ragged {
                    row,
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(CMatrix::from_fn(rows, cols, |i, j| self.0[i][j].value()))
    }

    /// Parses and checks the shape; `None` leaves a dimension unconstrained.
    pub fn to_matrix_shaped(&self, what: &str, rows: Option<usize>, cols: Option<usize>) -> Result<CMatrix> {
        let m = self.to_matrix()?;
        let ok_rows = rows.is_none_or(|r| r == m.nrows());
        // An empty row list cannot carry a column count.
        let ok_cols = m.nrows() == 0 || cols.is_none_or(|c| c == m.ncols());
        if !(ok_rows && ok_cols) {
            return Err(IoError::Shape(format!(
                "{what} has shape {}×{}, expected {}×{}",
                m.nrows(),
                m.ncols(),
                rows.map_or("?".to_string(), |r| r.to_string()),
                cols.map_or("?".to_string(), |c| c.to_string()),
            )));
        }
        Ok(if m.nrows() == 0 { CMatrix::zeros(0, cols.unwrap_or(0)) } else { m })
    }
}

/// `{"field", "matrix"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub field: ScalarField,
    pub matrix: JsonMatrix,
}

impl MatrixDoc {
    pub fn new(m: &CMatrix, field: ScalarField) -> Self {
        Self {
            field,
            matrix: JsonMatrix::new(m, field),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let m = self.matrix.to_matrix()?;
        if !self.field.admits(&m) {
            return Err(LinRelError::ImaginaryInRealField.into());
        }
        Ok(m)
    }
}

/// `{"field", "ambient_dim", "basis", "tol"}`; any spanning set is accepted as basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceDoc {
    pub field: ScalarField,
    pub ambient_dim: usize,
    pub basis: JsonMatrix,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl SubspaceDoc {
    pub fn new(s: &Subspace) -> Self {
        Self {
            field: s.field(),
            ambient_dim: s.ambient_dim(),
            basis: JsonMatrix::new(s.basis(), s.field()),
            tol: s.tol(),
        }
    }

    pub fn to_subspace(&self) -> Result<Subspace> {
        let b = self.basis.to_matrix_shaped("basis", Some(self.ambient_dim), None)?;
        Ok(Subspace::from_basis_or_span(self.field, b, self.tol)?)
    }

    /// Like [`SubspaceDoc::to_subspace`] but insists on an orthonormal basis,
    /// for data such as `L` that is written in basis coordinates.
    pub fn to_orthonormal(&self) -> Result<Subspace> {
        let b = self.basis.to_matrix_shaped("basis", Some(self.ambient_dim), None)?;
        Ok(Subspace::from_orthonormal(self.field, b, self.tol)?)
    }
}

/// `{"field", "n1", "n2", "basis", "tol"}` with `basis` of size `(n1 + n2) × k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub field: ScalarField,
    pub n1: usize,
    pub n2: usize,
    pub basis: JsonMatrix,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl RelationDoc {
    pub fn new(r: &LinearRelation) -> Self {
        let (n1, n2) = r.dims();
        Self {
            field: r.field(),
            n1,
            n2,
            basis: JsonMatrix::new(r.space().basis(), r.field()),
            tol: r.tol(),
        }
    }

    pub fn to_relation(&self) -> Result<LinearRelation> {
        let space = SubspaceDoc {
            field: self.field,
            ambient_dim: self.n1 + self.n2,
            basis: self.basis.clone(),
            tol: self.tol,
        }
        .to_subspace()?;
        Ok(LinearRelation::new(self.n1, self.n2, space)?)
    }
}

/// `{"field", "gram"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub field: ScalarField,
    pub gram: JsonMatrix,
}

impl FormDoc {
    pub fn new(w: &SesquilinearForm) -> Self {
        Self {
            field: w.field(),
            gram: JsonMatrix::new(w.gram(), w.field()),
        }
    }

    pub fn to_form(&self) -> Result<SesquilinearForm> {
        Ok(SesquilinearForm::new(self.field, self.gram.to_matrix()?)?)
    }
}

/// `{"field", "flavor", "x": {"ambient_dim", "basis"}, "l", "tol"}`; the basis of
/// `X` must be orthonormal because `L` is written in its coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagrangianDoc {
    pub field: ScalarField,
    pub flavor: Flavor,
    pub x: BasisDoc,
    pub l: JsonMatrix,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub ambient_dim: usize,
    pub basis: JsonMatrix,
}

impl LagrangianDoc {
    pub fn new(d: &LagrangianData) -> Self {
        let field = d.x().field();
        Self {
            field,
            flavor: d.flavor(),
            x: BasisDoc {
                ambient_dim: d.x().ambient_dim(),
                basis: JsonMatrix::new(d.x().basis(), field),
            },
            l: JsonMatrix::new(d.l(), field),
            tol: d.x().tol(),
        }
    }

    pub fn to_data(&self) -> Result<LagrangianData> {
        let x = SubspaceDoc {
            field: self.field,
            ambient_dim: self.x.ambient_dim,
            basis: self.x.basis.clone(),
            tol: self.tol,
        }
        .to_orthonormal()?;
        let l = self.l.to_matrix_shaped("L", Some(x.dim()), Some(x.dim()))?;
        Ok(LagrangianData::new(x, l, self.flavor)?)
    }
}

/// An edge endpoint: a number or one of the strings `"inf"`, `"-inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Finite(f64),
    Sentinel(String),
}

impl Endpoint {
    pub fn new(x: f64) -> Self {
        if x == f64::INFINITY {
            Endpoint::Sentinel("inf".into())
        } else if x == f64::NEG_INFINITY {
            Endpoint::Sentinel("-inf".into())
        } else {
            Endpoint::Finite(x)
        }
    }

    pub fn value(&self) -> Result<f64> {
        match self {
            Endpoint::Finite(x) => Ok(*x),
            Endpoint::Sentinel(s) if s == "inf" => Ok(f64::INFINITY),
            Endpoint::Sentinel(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Endpoint::Sentinel(s) => Err(IoError::Endpoint(s.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub a: Endpoint,
    pub b: Endpoint,
    #[serde(default)]
    pub gamma0: Option<String>,
    #[serde(default)]
    pub gamma1: Option<String>,
}

/// Boundary conditions in a graph document, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryDoc {
    Dirichlet,
    Neumann,
    Kirchhoff,
    Delta {
        coupling: BTreeMap<String, f64>,
    },
    /// `(X, L)` over `ℓ2(E′)`; `x` is `|E′| × dim X` with orthonormal columns.
    SelfAdjoint {
        field: ScalarField,
        x: JsonMatrix,
        l: JsonMatrix,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    /// `L: ℓ2(E_r) → ℓ2(E_l)`.
    SkewCoupling {
        field: ScalarField,
        l: JsonMatrix,
    },
}

impl BoundaryDoc {
    pub fn new(spec: &BoundarySpec) -> Self {
        match spec {
            BoundarySpec::Shorthand(Shorthand::Dirichlet) => BoundaryDoc::Dirichlet,
            BoundarySpec::Shorthand(Shorthand::Neumann) => BoundaryDoc::Neumann,
            BoundarySpec::Shorthand(Shorthand::Kirchhoff) => BoundaryDoc::Kirchhoff,
            BoundarySpec::Shorthand(Shorthand::Delta { coupling }) => BoundaryDoc::Delta {
                coupling: coupling.clone(),
            },
            BoundarySpec::SelfAdjoint(d) => {
                let field = d.x().field();
                BoundaryDoc::SelfAdjoint {
                    field,
                    x: JsonMatrix::new(d.x().basis(), field),
                    l: JsonMatrix::new(d.l(), field),
                    tol: d.x().tol(),
                }
            }
            BoundarySpec::SkewCoupling(l) => {
                let field = ScalarField::of(l);
                BoundaryDoc::SkewCoupling {
                    field,
                    l: JsonMatrix::new(l, field),
                }
            }
        }
    }

    /// Builds the boundary condition; the boundary space has dimension `boundary_dim = |E′|`.
    pub fn to_spec(&self, boundary_dim: usize) -> Result<BoundarySpec> {
        Ok(match self {
            BoundaryDoc::Dirichlet => BoundarySpec::Shorthand(Shorthand::Dirichlet),
            BoundaryDoc::Neumann => BoundarySpec::Shorthand(Shorthand::Neumann),
            BoundaryDoc::Kirchhoff => BoundarySpec::Shorthand(Shorthand::Kirchhoff),
            BoundaryDoc::Delta { coupling } => BoundarySpec::Shorthand(Shorthand::Delta {
                coupling: coupling.clone(),
            }),
            BoundaryDoc::SelfAdjoint { field, x, l, tol } => {
                let data = LagrangianDoc {
                    field: *field,
                    flavor: Flavor::SelfAdjoint,
                    x: BasisDoc {
                        ambient_dim: boundary_dim,
                        basis: x.clone(),
                    },
                    l: l.clone(),
                    tol: *tol,
                }
                .to_data()?;
                BoundarySpec::SelfAdjoint(data)
            }
            BoundaryDoc::SkewCoupling { field, l } => {
                let m = l.to_matrix()?;
                if !field.admits(&m) {
                    return Err(LinRelError::ImaginaryInRealField.into());
                }
                BoundarySpec::SkewCoupling(m)
            }
        })
    }
}

/// `{"vertices", "edges", "bc"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bc: Option<BoundaryDoc>,
}

impl GraphDoc {
    pub fn new(g: &MetricGraph, bc: Option<&BoundarySpec>) -> Self {
        Self {
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    a: Endpoint::new(e.a),
                    b: Endpoint::new(e.b),
                    gamma0: e.gamma0.clone(),
                    gamma1: e.gamma1.clone(),
                })
                .collect(),
            bc: bc.map(BoundaryDoc::new),
        }
    }

    pub fn edges(&self) -> Result<Vec<Edge>> {
        self.edges
            .iter()
            .map(|e| Ok(Edge::new(e.id.clone(), e.a.value()?, e.b.value()?, e.gamma0.as_deref(), e.gamma1.as_deref())))
            .collect()
    }

    pub fn to_graph(&self) -> Result<MetricGraph> {
        Ok(MetricGraph::new(self.vertices.clone(), self.edges()?)?)
    }

    /// The boundary condition of the document, if present.
    pub fn to_spec(&self, g: &MetricGraph) -> Result<Option<BoundarySpec>> {
        let dim = g.report().boundary_count;
        self.bc.as_ref().map(|bc| bc.to_spec(dim)).transpose()
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize without failure");
    s.push('\n');
    s
}

/// A float in shortest round-trip form; non-finite values as `inf`, `-inf`, `NaN`.
pub fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// CSV text with the given header; every cell is written as given.
pub fn csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::re;
    use crate::graph::lattice_delta_coupling;

    fn roundtrip<T>(value: &T) -> T
    where
        T: Serialize + for<'de> Deserialize<'de>,
    {
        from_json(&to_json(value)).unwrap()
    }

    #[test]
    fn real_and_complex_entries() {
        let m = CMatrix::from_row_slice(1, 2, &[re(1.5), Scalar::new(0.0, -2.0)]);
        let text = serde_json::to_string(&JsonMatrix::new(&m, ScalarField::Complex)).unwrap();
        assert_eq!(text, "[[[1.5,0.0],[0.0,-2.0]]]");
        let real = serde_json::to_string(&JsonMatrix::new(&m.map(|z| re(z.re)), ScalarField::Real)).unwrap();
        assert_eq!(real, "[[1.5,0.0]]");
        let mixed: JsonMatrix = from_json("[[1, [0, 2]]]").unwrap();
        assert_eq!(mixed.to_matrix().unwrap()[(0, 1)], Scalar::new(0.0, 2.0));
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let m: JsonMatrix = from_json("[[1, 2], [3]]").unwrap();
        assert!(matches!(m.to_matrix(), Err(IoError::Ragged { row: 1, .. })));
    }

    #[test]
    fn malformed_json_reports_the_line() {
        let err = from_json::<RelationDoc>("{\n  \"field\": \"real\",\n  \"n1\": oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn relation_roundtrip_is_exact() {
        let a = CMatrix::from_row_slice(2, 2, &[re(2.0), re(1.0), re(1.0), re(3.0)]);
        let r = LinearRelation::graph(ScalarField::Real, &a, DEFAULT_TOL).unwrap();
        let doc = RelationDoc::new(&r);
        let back = roundtrip(&doc);
        assert_eq!(back, doc);
        assert!(back.to_relation().unwrap().approx_eq(&r).unwrap());
    }

    #[test]
    fn lagrangian_roundtrip_is_exact() {
        let x = Subspace::span(ScalarField::Complex, &CMatrix::from_row_slice(3, 1, &[re(1.0), Scalar::new(0.0, 1.0), re(0.0)]), DEFAULT_TOL).unwrap();
        let d = LagrangianData::new(x, CMatrix::from_element(1, 1, re(0.25)), Flavor::SelfAdjoint).unwrap();
        let doc = LagrangianDoc::new(&d);
        assert_eq!(roundtrip(&doc), doc);
        assert_eq!(doc.to_data().unwrap().l(), d.l());
    }

    #[test]
    fn non_orthonormal_x_is_rejected_for_lagrangian_data() {
        let doc: LagrangianDoc =
            from_json(r#"{"field": "real", "flavor": "self_adjoint", "x": {"ambient_dim": 2, "basis": [[1], [1]]}, "l": [[0]]}"#).unwrap();
        assert!(matches!(doc.to_data(), Err(IoError::LinRel(LinRelError::NotOrthonormal { .. }))));
    }

    #[test]
    fn graph_with_infinite_endpoint() {
        let text = r#"{"vertices": ["o"], "edges": [{"id": "e", "a": 0, "b": "inf", "gamma0": "o"}], "bc": {"type": "dirichlet"}}"#;
        let doc: GraphDoc = from_json(text).unwrap();
        let g = doc.to_graph().unwrap();
        assert_eq!(g.edges()[0].b, f64::INFINITY);
        assert!(matches!(doc.to_spec(&g).unwrap(), Some(BoundarySpec::Shorthand(Shorthand::Dirichlet))));
        let again = GraphDoc::new(&g, doc.to_spec(&g).unwrap().as_ref());
        assert_eq!(again, doc);
        assert!(to_json(&again).contains("\"inf\""));
    }

    #[test]
    fn bad_sentinel_is_rejected() {
        let doc: GraphDoc = from_json(r#"{"vertices": ["o"], "edges": [{"id": "e", "a": 0, "b": "infinity", "gamma0": "o"}]}"#).unwrap();
        assert!(matches!(doc.to_graph(), Err(IoError::Endpoint(_))));
    }

    #[test]
    fn delta_graph_roundtrip() {
        let g = MetricGraph::integer_lattice(3).unwrap();
        let spec = BoundarySpec::Shorthand(lattice_delta_coupling(3));
        let doc = GraphDoc::new(&g, Some(&spec));
        assert_eq!(roundtrip(&doc), doc);
    }

    #[test]
    fn csv_floats_roundtrip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e21, 0.0] {
            assert_eq!(csv_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(csv_float(f64::INFINITY), "inf");
        assert_eq!(csv(&["a", "b"], [vec!["1".to_string(), "2".to_string()]]), "a,b\n1,2\n");
    }
}
