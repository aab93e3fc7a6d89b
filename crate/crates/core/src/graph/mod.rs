//! Metric graphs, the boundary index set `E′` and boundary conditions.
//!
//! An edge is an interval `(a_e, b_e)` with `a_e < b_e`, possibly unbounded on
//! either side. Finite endpoints are attached to vertices; the boundary space
//! `ℓ2(E′)` has one coordinate per finite endpoint.

mod boundary;
mod metric;

pub use boundary::{
    check_skew_coupling, lattice_delta_coupling, shorthand_to_xl, BoundaryIndex, BoundarySpec, EndFlag, Shorthand,
};
pub use metric::{validate_graph, Edge, GraphReport, MetricGraph, DEFAULT_MIN_EDGE_LENGTH};

use crate::linrel::LinRelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("invalid graph:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("E_r and E_l cardinalities differ (|E_l| = {left}, |E_r| = {right}); a skew-self-adjoint coupling needs |E_r| = |E_l|")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("coupling is not unitary (‖L†L − I‖_F = {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("boundary condition has the wrong kind: expected {expected}")]
    WrongBoundaryKind { expected: &'static str },
    #[error(transparent)]
    LinRel(#[from] LinRelError),
}

pub type Result<T> = std::result::Result<T, GraphError>;
