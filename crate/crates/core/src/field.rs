//! Scalar field tags and the dense matrix type shared by every module.
//!
//! All matrices are stored with complex entries. A [`ScalarField::Real`] tag
//! constrains the imaginary parts to vanish, and the linear-algebra kernels
//! switch to real arithmetic for such data.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Scalar = Complex64;
pub type CMatrix = DMatrix<Complex64>;

/// Tolerance used for rank and equality decisions unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    /// Largest imaginary part allowed in a matrix tagged real.
    const REAL_IMAG_TOL: f64 = 1e-14;

    pub fn is_real(self) -> bool {
        matches!(self, ScalarField::Real)
    }

    /// Whether `m` is a valid matrix over this field.
    pub fn admits(self, m: &CMatrix) -> bool {
        match self {
            ScalarField::Complex => true,
            ScalarField::Real => max_imag(m) <= Self::REAL_IMAG_TOL * m.norm().max(1.0),
        }
    }

    /// Smallest field over which `m` is defined.
    pub fn of(m: &CMatrix) -> Self {
        if ScalarField::Real.admits(m) {
            ScalarField::Real
        } else {
            ScalarField::Complex
        }
    }
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarField::Real => f.write_str("real"),
            ScalarField::Complex => f.write_str("complex"),
        }
    }
}

#[inline]
pub fn re(x: f64) -> Scalar {
    Complex64::new(x, 0.0)
}

pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

/// Drops imaginary parts; used after computations over the real field.
pub fn real_part(m: &CMatrix) -> CMatrix {
    m.map(|z| re(z.re))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// `[a b]`
pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows(), "hstack row mismatch");
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// `[a; b]`
pub fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols(), "vstack column mismatch");
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// `[[a, b], [c, d]]` for square identity-like blocks.
pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    vstack(&hstack(a, b), &hstack(c, d))
}

/// Relative Hermiticity defect `‖A − A†‖_F / max(1, ‖A‖_F)`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm() / a.norm().max(1.0)
}

/// Relative skew-Hermiticity defect `‖A + A†‖_F / max(1, ‖A‖_F)`.
pub fn skew_hermitian_defect(a: &CMatrix) -> f64 {
    (a + a.adjoint()).norm() / a.norm().max(1.0)
}

/// `‖A†A − I‖_F`
pub fn unitary_defect(a: &CMatrix) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    (a.adjoint() * a - identity(a.ncols())).norm()
}
