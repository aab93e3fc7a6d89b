use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::{re, unitary_defect, CMatrix, ScalarField, DEFAULT_TOL};
use crate::linrel::{Flavor, LagrangianData, Subspace};

use super::{GraphError, MetricGraph, Result};

/// `0` for the start point `a_e`, `1` for the end point `b_e`.
pub type EndFlag = u8;

/// Ordered enumeration of `E′ = (E_l × {0}) ∪ (E_r × {1})`: edges in
/// declaration order, flag 0 before flag 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryIndex {
    entries: Vec<(usize, EndFlag)>,
    position: Vec<[Option<usize>; 2]>,
}

impl BoundaryIndex {
    pub fn new(g: &MetricGraph) -> Self {
        let mut entries = Vec::new();
        let mut position = vec![[None, None]; g.edges().len()];
        for (i, e) in g.edges().iter().enumerate() {
            if e.has_left() {
                position[i][0] = Some(entries.len());
                entries.push((i, 0));
            }
            if e.has_right() {
                position[i][1] = Some(entries.len());
                entries.push((i, 1));
            }
        }
        Self { entries, position }
    }

    /// `(edge index, flag)` pairs in coordinate order.
    pub fn entries(&self) -> &[(usize, EndFlag)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coordinate of `(edge, flag)` in `ℓ2(E′)`.
    pub fn position(&self, edge: usize, flag: EndFlag) -> Option<usize> {
        self.position.get(edge).and_then(|p| p[flag as usize])
    }

    /// The vertex attached at each coordinate.
    pub fn vertices<'g>(&self, g: &'g MetricGraph) -> Vec<&'g str> {
        self.entries
            .iter()
            .map(|&(e, flag)| {
                let edge = &g.edges()[e];
                let v = if flag == 0 { &edge.gamma0 } else { &edge.gamma1 };
                v.as_deref().expect("validated graphs attach every finite endpoint")
            })
            .collect()
    }
}

/// Vertex-based boundary conditions expanded by [`shorthand_to_xl`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shorthand {
    /// `f = 0` at every boundary point.
    Dirichlet,
    /// `f′ = 0` at every boundary point.
    Neumann,
    /// Continuity at each vertex and vanishing sum of the derivatives into the edges.
    Kirchhoff,
    /// Continuity at each vertex `v` and `−Σ ∂f(v) = α_v f(v)`, where `∂f(v)` are
    /// the derivatives into the attached edges. Vertices missing from the map
    /// get `α_v = 0`.
    Delta { coupling: BTreeMap<String, f64> },
}

/// Boundary conditions on a metric graph.
#[derive(Debug, Clone)]
pub enum BoundarySpec {
    /// `(X, L)` over `ℓ2(E′)` for the Laplacian.
    SelfAdjoint(LagrangianData),
    /// Unitary `L: ℓ2(E_r) → ℓ2(E_l)` for the first-derivative operator.
    SkewCoupling(CMatrix),
    Shorthand(Shorthand),
}

impl BoundarySpec {
    /// Checks the boundary condition against the graph.
    pub fn validate(&self, g: &MetricGraph) -> Result<()> {
        match self {
            BoundarySpec::SelfAdjoint(data) => check_self_adjoint(g, data),
            BoundarySpec::SkewCoupling(l) => check_skew_coupling(g, l, DEFAULT_TOL),
            BoundarySpec::Shorthand(s) => shorthand_to_xl(g, s, ScalarField::Real).map(|_| ()),
        }
    }

    /// The `(X, L)` data of a Laplacian boundary condition.
    pub fn self_adjoint_data(&self, g: &MetricGraph, field: ScalarField) -> Result<LagrangianData> {
        match self {
            BoundarySpec::SelfAdjoint(data) => {
                check_self_adjoint(g, data)?;
                Ok(data.clone())
            }
            BoundarySpec::Shorthand(s) => shorthand_to_xl(g, s, field),
            BoundarySpec::SkewCoupling(_) => Err(GraphError::WrongBoundaryKind {
                expected: "self-adjoint (X, L) data or a shorthand",
            }),
        }
    }

    pub fn skew_coupling(&self) -> Result<&CMatrix> {
        match self {
            BoundarySpec::SkewCoupling(l) => Ok(l),
            _ => Err(GraphError::WrongBoundaryKind {
                expected: "a unitary coupling",
            }),
        }
    }
}

fn check_self_adjoint(g: &MetricGraph, data: &LagrangianData) -> Result<()> {
    let n = BoundaryIndex::new(g).len();
    if data.x().ambient_dim() != n {
        return Err(GraphError::Dimension {
            what: "X ambient dimension vs |E′|",
            expected: n,
            found: data.x().ambient_dim(),
        });
    }
    if data.flavor() != Flavor::SelfAdjoint {
        return Err(GraphError::WrongBoundaryKind {
            expected: "Hermitian L (self-adjoint flavor)",
        });
    }
    Ok(())
}

/// Checks `L: ℓ2(E_r) → ℓ2(E_l)` for shape and unitarity.
pub fn check_skew_coupling(g: &MetricGraph, l: &CMatrix, tol: f64) -> Result<()> {
    let left = g.report().left_count;
    let right = g.report().right_count;
    if left != right {
        return Err(GraphError::CardinalityMismatch { left, right });
    }
    if l.nrows() != left || l.ncols() != right {
        return Err(GraphError::Dimension {
            what: "coupling shape |E_l| × |E_r|",
            expected: left,
            found: if l.nrows() != left { l.nrows() } else { l.ncols() },
        });
    }
    let defect = unitary_defect(l);
    if defect > tol {
        return Err(GraphError::NotUnitary { defect });
    }
    Ok(())
}

/// Expands a shorthand into `(X, L)` over `ℓ2(E′)`.
///
/// For Kirchhoff and δ conditions, `X` is spanned by the normalized vertex
/// indicators `χ_v/√deg(v)` and `L` is diagonal in that basis with entry
/// `−α_v/deg(v)`. With these values the condition `L·(X-coordinates of tr f)
/// = Q·str f′` reads `f` continuous at `v` and `−Σ ∂f(v) = α_v f(v)`.
pub fn shorthand_to_xl(g: &MetricGraph, s: &Shorthand, field: ScalarField) -> Result<LagrangianData> {
    let index = BoundaryIndex::new(g);
    let n = index.len();
    let (x, l) = match s {
        Shorthand::Dirichlet => (Subspace::zero(field, n), CMatrix::zeros(0, 0)),
        Shorthand::Neumann => (Subspace::full(field, n), CMatrix::zeros(n, n)),
        Shorthand::Kirchhoff => vertex_data(g, &index, field, &BTreeMap::new())?,
        Shorthand::Delta { coupling } => vertex_data(g, &index, field, coupling)?,
    };
    Ok(LagrangianData::new(x, l, Flavor::SelfAdjoint)?)
}

fn vertex_data(
    g: &MetricGraph,
    index: &BoundaryIndex,
    field: ScalarField,
    coupling: &BTreeMap<String, f64>,
) -> Result<(Subspace, CMatrix)> {
    if let Some(unknown) = coupling.keys().find(|v| g.vertex_index(v).is_none()) {
        return Err(GraphError::UnknownVertex(unknown.clone()));
    }
    if let Some((v, a)) = coupling.iter().find(|(_, a)| !a.is_finite()) {
        return Err(GraphError::Invalid(vec![format!("coupling at vertex '{v}' is not finite: {a}")]));
    }
    let attached = index.vertices(g);
    let mut columns = Vec::new();
    let mut diagonal = Vec::new();
    for v in g.vertices() {
        let points: Vec<usize> = (0..attached.len()).filter(|&p| attached[p] == v).collect();
        if points.is_empty() {
            continue;
        }
        let deg = points.len() as f64;
        let mut chi = CMatrix::zeros(index.len(), 1);
        for p in points {
            chi[(p, 0)] = re(1.0 / deg.sqrt());
        }
        columns.push(chi);
        diagonal.push(-coupling.get(v).copied().unwrap_or(0.0) / deg);
    }
    let mut basis = CMatrix::zeros(index.len(), columns.len());
    for (j, c) in columns.iter().enumerate() {
        basis.set_column(j, &c.column(0));
    }
    let l = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(diagonal.len(), diagonal.into_iter().map(re)));
    Ok((Subspace::from_orthonormal(field, basis, DEFAULT_TOL)?, l))
}

/// Couplings `α_n = 2n` at every vertex of [`MetricGraph::integer_lattice`].
pub fn lattice_delta_coupling(n: i64) -> Shorthand {
    Shorthand::Delta {
        coupling: (-n..=n).map(|k| (k.to_string(), 2.0 * k as f64)).collect(),
    }
}
