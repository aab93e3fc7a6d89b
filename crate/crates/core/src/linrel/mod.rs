//! Finite-dimensional calculus of subspaces, sesquilinear forms and linear
//! relations.
//!
//! A [`LinearRelation`] is a subspace of `K^{n1} ⊕ K^{n2}` stored through an
//! orthonormal basis. Self-adjointness, skew-self-adjointness and unitarity
//! are decided by comparing subspaces through principal angles, and each of
//! them coincides with self-orthogonality under one of the three standard
//! forms built by [`SesquilinearForm`].

mod arens;
mod cayley;
mod finite;
mod form;
mod pullback;
mod relation;
mod subspace;

pub use arens::{arens_compose, arens_decompose, unitary_extract, Flavor, LagrangianData};
pub use cayley::{cayley_map, cayley_matrix, CayleyVariant};
pub use finite::{finite_set_pullback_check, FinitePullbackReport};
pub use form::{form_orthogonal_complement, is_lagrangian_within, is_self_orthogonal, SesquilinearForm};
pub use pullback::{pullback, BoundarySystem, BoundarySystemReport};
pub use relation::{LinearRelation, RelationFlags};
pub use subspace::Subspace;

use crate::field::ScalarField;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinRelError {
    #[error("scalar field mismatch: {left} vs {right}")]
    FieldMismatch { left: ScalarField, right: ScalarField },
    #[error("matrix has imaginary parts but the field is real")]
    ImaginaryInRealField,
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("relation is not square: dims ({n1}, {n2})")]
    NotSquare { n1: usize, n2: usize },
    #[error("basis is not orthonormal (defect {defect:e})")]
    NotOrthonormal { defect: f64 },
    #[error("matrix is not {expected} (defect {defect:e})")]
    MatrixProperty { expected: &'static str, defect: f64 },
    #[error("relation is not {expected}")]
    Classification { expected: &'static str },
    #[error("subspace is not self-orthogonal (distance {distance:e})")]
    NotSelfOrthogonal { distance: f64 },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("map is not surjective: rank {rank}, expected {expected}")]
    NotSurjective { rank: usize, expected: usize },
    #[error("forms are not compatible with the map (residual {residual:e})")]
    IncompatibleForms { residual: f64 },
    #[error("{0} requires the complex field")]
    RequiresComplex(&'static str),
    #[error("invalid finite instance: {0}")]
    FiniteInstance(String),
}

pub type Result<T> = std::result::Result<T, LinRelError>;

pub(crate) fn join_fields(left: ScalarField, right: ScalarField) -> Result<ScalarField> {
    if left == right {
        Ok(left)
    } else {
        Err(LinRelError::FieldMismatch { left, right })
    }
}
