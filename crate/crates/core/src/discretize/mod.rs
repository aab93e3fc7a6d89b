//! Finite-difference realizations of the Laplacian and the first-derivative
//! operator on metric graphs.
//!
//! Functions live on uniform grids, one per edge, concatenated in edge order.
//! Boundary conditions are imposed as sparse linear constraints on the grid
//! values; eigenvalues and symmetry checks are computed on an orthonormal
//! basis of the constraint kernel.

mod derivative;
mod grid;
mod laplace;
mod reduce;
mod residual;
mod sobolev;
pub(crate) mod trace;

pub use derivative::{
    assemble_derivative_check, derivative_boundary_system, derivative_constraints, derivative_form, DerivativeReport,
};
pub use grid::{DiscreteFunction, EdgeGrid, GridSpec, Grids, Truncation, TruncationOptions, MAX_TOTAL_POINTS, MIN_POINTS};
pub use laplace::{
    assemble_laplacian_eig, laplace_boundary_system, laplace_constraints, laplace_form, LaplacePencil, LaplaceSpectrum,
};
pub use reduce::ConstrainedBasis;
pub use residual::{
    boundary_system_residual, first_derivative, observed_order, reference_pair, refinement_study, second_derivative,
    OperatorKind, RefinementRow,
};
pub use sobolev::{trace_norm_closed_form, trace_operator_norm};
pub use trace::{build_trace_operators, SparseRow, TraceOperators};

use crate::graph::GraphError;
use crate::linrel::LinRelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscretizeError {
    #[error("grid on edge {edge} has {points} points; at least {required} are needed")]
    GridTooCoarse { edge: String, points: usize, required: usize },
    #[error("{points} grid points exceed the limit of {limit}")]
    TooLarge { points: usize, limit: usize },
    #[error("requested {requested} eigenvalues but the constrained space has dimension {available}")]
    TooManyEigenvalues { requested: usize, available: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    LinRel(#[from] LinRelError),
}

pub type Result<T> = std::result::Result<T, DiscretizeError>;
