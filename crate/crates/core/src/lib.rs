//! Boundary systems for self-adjoint and skew-self-adjoint operators.
//!
//! * [`linrel`]: finite-dimensional linear relations, sesquilinear forms,
//!   self-orthogonal subspaces, Arens decompositions and Cayley maps.
//! * [`graph`]: metric graphs and boundary conditions on them.
//! * [`discretize`]: finite-difference Laplacians and first-derivative
//!   operators with the boundary conditions imposed as linear constraints.
//! * [`secular`]: exact Laplacian eigenvalues from the secular determinant.
//! * [`transport`]: the unitary transport group on grids aligned with the edges.
//! * [`io`]: JSON documents and CSV output.

pub mod discretize;
pub mod field;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod linrel;
pub mod sample;
pub mod secular;
pub mod transport;
