use serde::{Deserialize, Serialize};

use crate::field::{hstack, identity, vstack, CMatrix, ScalarField, DEFAULT_TOL};
use crate::linalg;

use super::{is_self_orthogonal, LinRelError, Result, SesquilinearForm, Subspace};

/// A subspace `M ⊆ K^{n1} ⊕ K^{n2}`; the first `n1` coordinates form the
/// first component.
#[derive(Debug, Clone)]
pub struct LinearRelation {
    n1: usize,
    n2: usize,
    space: Subspace,
}

/// Outcome of [`LinearRelation::flags`]. Flags that only make sense for
/// square relations are `None` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFlags {
    pub symmetric: Option<bool>,
    pub self_adjoint: Option<bool>,
    pub skew_symmetric: Option<bool>,
    pub skew_self_adjoint: Option<bool>,
    pub unitary: bool,
    pub is_operator_graph: bool,
    pub self_orthogonal_skew_form: Option<bool>,
    pub self_orthogonal_symmetric_form: Option<bool>,
    pub self_orthogonal_unitary_form: bool,
}

impl LinearRelation {
    pub fn new(n1: usize, n2: usize, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != n1 + n2 {
            return Err(LinRelError::DimensionMismatch {
                context: "relation ambient dimension n1 + n2",
                expected: n1 + n2,
                found: space.ambient_dim(),
            });
        }
        Ok(Self { n1, n2, space })
    }

    /// Span of the pairs `(first[:, j], second[:, j])`.
    pub fn from_pairs(field: ScalarField, first: &CMatrix, second: &CMatrix, tol: f64) -> Result<Self> {
        if first.ncols() != second.ncols() {
            return Err(LinRelError::DimensionMismatch {
                context: "pair count",
                expected: first.ncols(),
                found: second.ncols(),
            });
        }
        let space = Subspace::span(field, &vstack(first, second), tol)?;
        Self::new(first.nrows(), second.nrows(), space)
    }

    /// Graph `{(x, A·x)}` of an `n2 × n1` matrix.
    pub fn graph(field: ScalarField, a: &CMatrix, tol: f64) -> Result<Self> {
        Self::from_pairs(field, &identity(a.ncols()), a, tol)
    }

    /// `{0} ⊕ K^{n2}`.
    pub fn multivalued(field: ScalarField, n1: usize, n2: usize) -> Self {
        let basis = vstack(&CMatrix::zeros(n1, n2), &identity(n2));
        Self {
            n1,
            n2,
            space: Subspace::from_parts(field, basis, DEFAULT_TOL),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn field(&self) -> ScalarField {
        self.space.field()
    }

    pub fn tol(&self) -> f64 {
        self.space.tol()
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Self {
            space: self.space.with_tol(tol),
            ..self
        }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn first_block(&self) -> CMatrix {
        self.space.basis().rows(0, self.n1).into_owned()
    }

    pub fn second_block(&self) -> CMatrix {
        self.space.basis().rows(self.n1, self.n2).into_owned()
    }

    fn rebuild(&self, n1: usize, n2: usize, basis: CMatrix) -> Self {
        Self {
            n1,
            n2,
            space: Subspace::from_parts(self.field(), basis, self.tol()),
        }
    }

    /// `M⁻¹ = {(y, x) : (x, y) ∈ M}`.
    pub fn inverse(&self) -> Self {
        self.rebuild(self.n2, self.n1, vstack(&self.second_block(), &self.first_block()))
    }

    /// Plain orthogonal complement in `K^{n1} ⊕ K^{n2}`.
    pub fn orthogonal(&self) -> Self {
        Self {
            n1: self.n1,
            n2: self.n2,
            space: self.space.complement(),
        }
    }

    /// `S·M` with `S = diag(1, −1)`.
    pub fn s_multiply(&self) -> Result<Self> {
        self.require_square()?;
        Ok(self.rebuild(self.n1, self.n2, vstack(&self.first_block(), &(-self.second_block()))))
    }

    /// `M* = {(y, x) : ⟨y, v⟩ = ⟨x, u⟩ for all (u, v) ∈ M}`.
    pub fn adjoint(&self) -> Self {
        // Each basis pair (u, v) contributes the linear condition v†y − u†x = 0.
        let conditions = hstack(&self.second_block().adjoint(), &(-self.first_block().adjoint()));
        let kernel = linalg::null_space(
            &conditions,
            self.field(),
            linalg::cutoff(conditions.nrows(), conditions.ncols(), self.tol(), 1.0),
        );
        self.rebuild(self.n2, self.n1, kernel)
    }

    /// `P₁M`, the projection onto the first component.
    pub fn domain(&self) -> Subspace {
        span_block(self.field(), &self.first_block(), self.tol())
    }

    pub fn range(&self) -> Subspace {
        span_block(self.field(), &self.second_block(), self.tol())
    }

    /// `{x : (x, 0) ∈ M}`.
    pub fn kernel(&self) -> Subspace {
        self.inverse().multivalued_part()
    }

    /// `{y : (0, y) ∈ M}`.
    pub fn multivalued_part(&self) -> Subspace {
        let first = self.first_block();
        let coeffs = linalg::null_space(&first, self.field(), linalg::cutoff(first.nrows(), first.ncols(), self.tol(), 1.0));
        span_block(self.field(), &(self.second_block() * coeffs), self.tol())
    }

    /// `M ∩ ({0} ⊕ K^{n2}) = {0}`.
    pub fn is_operator_graph(&self) -> bool {
        self.multivalued_part().dim() == 0
    }

    /// Matrix `A` with `M = graph(A)`; requires an operator graph on all of `K^{n1}`.
    pub fn as_operator(&self) -> Result<CMatrix> {
        if !self.is_operator_graph() || self.dim() != self.n1 {
            return Err(LinRelError::Classification {
                expected: "the graph of an operator defined everywhere",
            });
        }
        let first = self.first_block();
        let inv = first
            .try_inverse()
            .ok_or_else(|| LinRelError::Inconsistent("first block of a graph basis is singular".into()))?;
        Ok(self.second_block() * inv)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(LinRelError::DimensionMismatch {
                context: "relation dims",
                expected: self.n1 + self.n2,
                found: other.n1 + other.n2,
            });
        }
        Ok(())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_same_shape(other)?;
        self.space.contains(&other.space)
    }

    pub fn approx_eq(&self, other: &Self) -> Result<bool> {
        self.check_same_shape(other)?;
        self.space.approx_eq(&other.space)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        self.space.distance(&other.space)
    }

    fn require_square(&self) -> Result<()> {
        if self.n1 != self.n2 {
            return Err(LinRelError::NotSquare { n1: self.n1, n2: self.n2 });
        }
        Ok(())
    }

    /// `M ⊆ M*`.
    pub fn is_symmetric(&self) -> Result<bool> {
        self.require_square()?;
        self.adjoint().contains(self)
    }

    /// `M = M*`.
    pub fn is_self_adjoint(&self) -> Result<bool> {
        self.require_square()?;
        self.approx_eq(&self.adjoint())
    }

    /// `M ⊆ S·M*`.
    pub fn is_skew_symmetric(&self) -> Result<bool> {
        self.adjoint().s_multiply()?.contains(self)
    }

    /// `M = S·M*`.
    pub fn is_skew_self_adjoint(&self) -> Result<bool> {
        self.approx_eq(&self.adjoint().s_multiply()?)
    }

    /// `M* = M⁻¹`.
    pub fn is_unitary(&self) -> bool {
        self.adjoint().approx_eq(&self.inverse()).unwrap_or(false)
    }

    pub fn flags(&self) -> RelationFlags {
        let square = self.n1 == self.n2;
        let field = self.field();
        let when_square = |f: &dyn Fn() -> Result<bool>| if square { f().ok() } else { None };
        RelationFlags {
            symmetric: when_square(&|| self.is_symmetric()),
            self_adjoint: when_square(&|| self.is_self_adjoint()),
            skew_symmetric: when_square(&|| self.is_skew_symmetric()),
            skew_self_adjoint: when_square(&|| self.is_skew_self_adjoint()),
            unitary: self.is_unitary(),
            is_operator_graph: self.is_operator_graph(),
            self_orthogonal_skew_form: when_square(&|| {
                is_self_orthogonal(&self.space, &SesquilinearForm::standard_skew(field, self.n1))
            }),
            self_orthogonal_symmetric_form: when_square(&|| {
                is_self_orthogonal(&self.space, &SesquilinearForm::standard_symmetric(field, self.n1))
            }),
            self_orthogonal_unitary_form: is_self_orthogonal(
                &self.space,
                &SesquilinearForm::standard_unitary(field, self.n1, self.n2),
            )
            .unwrap_or(false),
        }
    }
}

fn span_block(field: ScalarField, block: &CMatrix, tol: f64) -> Subspace {
    let cut = linalg::cutoff(block.nrows(), block.ncols(), tol, 1.0);
    Subspace::from_parts(field, linalg::orth(block, field, cut), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::re;
    use crate::sample;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(rows, cols, &data.iter().map(|&x| re(x)).collect::<Vec<_>>())
    }

    #[test]
    fn hermitian_graph_flags() {
        let m = LinearRelation::graph(ScalarField::Complex, &real(2, 2, &[1.0, 0.0, 0.0, 2.0]), DEFAULT_TOL).unwrap();
        let f = m.flags();
        assert_eq!(f.symmetric, Some(true));
        assert_eq!(f.self_adjoint, Some(true));
        assert_eq!(f.skew_symmetric, Some(false));
        assert_eq!(f.skew_self_adjoint, Some(false));
        assert!(!f.unitary);
        assert!(f.is_operator_graph);
    }

    #[test]
    fn rotation_generator_is_skew() {
        let m = LinearRelation::graph(ScalarField::Real, &real(2, 2, &[0.0, 1.0, -1.0, 0.0]), DEFAULT_TOL).unwrap();
        let f = m.flags();
        assert_eq!(f.skew_symmetric, Some(true));
        assert_eq!(f.skew_self_adjoint, Some(true));
        assert_eq!(f.self_adjoint, Some(false));
        assert!(f.is_operator_graph);
    }

    #[test]
    fn adjoint_of_graph_is_graph_of_conjugate_transpose() {
        let mut rng = StdRng::seed_from_u64(7);
        let a = sample::random_matrix(&mut rng, ScalarField::Complex, 3, 2);
        let m = LinearRelation::graph(ScalarField::Complex, &a, DEFAULT_TOL).unwrap();
        let expected = LinearRelation::graph(ScalarField::Complex, &a.adjoint(), DEFAULT_TOL).unwrap();
        assert!(m.adjoint().approx_eq(&expected).unwrap());
    }

    #[test]
    fn adjoint_of_pure_multivalued_relation() {
        // (y, x) ∈ M* iff ⟨y, v⟩ = ⟨x, 0⟩ for all v, i.e. y = 0.
        let m = LinearRelation::multivalued(ScalarField::Real, 2, 2);
        assert!(m.adjoint().approx_eq(&m).unwrap());
        assert!(!m.is_operator_graph());
        assert_eq!(m.domain().dim(), 0);
    }

    #[test]
    fn inverse_of_invertible_graph() {
        let a = real(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let m = LinearRelation::graph(ScalarField::Real, &a, DEFAULT_TOL).unwrap();
        let inv = LinearRelation::graph(ScalarField::Real, &a.clone().try_inverse().unwrap(), DEFAULT_TOL).unwrap();
        assert!(m.inverse().approx_eq(&inv).unwrap());
        let recovered = m.as_operator().unwrap();
        assert!((recovered - a).norm() < 1e-12);
    }

    #[test]
    fn s_multiply_requires_square() {
        let m = LinearRelation::graph(ScalarField::Real, &real(1, 2, &[1.0, 2.0]), DEFAULT_TOL).unwrap();
        assert!(matches!(m.s_multiply(), Err(LinRelError::NotSquare { .. })));
        assert!(matches!(m.is_self_adjoint(), Err(LinRelError::NotSquare { .. })));
        assert_eq!(m.flags().self_adjoint, None);
    }

    #[test]
    fn adjoint_identity_chain_on_random_relations() {
        let mut rng = StdRng::seed_from_u64(11);
        for field in [ScalarField::Real, ScalarField::Complex] {
            for _ in 0..40 {
                let m = sample::random_square_relation(&mut rng, field, 4);
                let adj = m.adjoint();
                let s_perp_inv = m.orthogonal().s_multiply().unwrap().inverse();
                let sm_perp_inv = m.s_multiply().unwrap().orthogonal().inverse();
                let sm_inv_perp = m.s_multiply().unwrap().inverse().orthogonal();
                let s_minv_perp = m.inverse().s_multiply().unwrap().orthogonal();
                let s_of_minv_perp = m.inverse().orthogonal().s_multiply().unwrap();
                for other in [s_perp_inv, sm_perp_inv, sm_inv_perp, s_minv_perp, s_of_minv_perp] {
                    assert!(adj.approx_eq(&other).unwrap());
                }
                assert!(m.inverse().inverse().approx_eq(&m).unwrap());
                assert!(adj.adjoint().approx_eq(&m).unwrap());
            }
        }
    }
}
