use crate::field::{hstack, identity, zeros, CMatrix, ScalarField, DEFAULT_TOL};
use crate::linalg;

use super::{join_fields, LinRelError, Result};

/// A linear subspace of `K^n` held as an orthonormal basis (`n × k`).
#[derive(Debug, Clone)]
pub struct Subspace {
    field: ScalarField,
    basis: CMatrix,
    tol: f64,
}

impl Subspace {
    /// Span of the columns of `vectors`.
    pub fn span(field: ScalarField, vectors: &CMatrix, tol: f64) -> Result<Self> {
        if !field.admits(vectors) {
            return Err(LinRelError::ImaginaryInRealField);
        }
        let scale = linalg::spectral_norm(vectors, field);
        let cut = linalg::cutoff(vectors.nrows(), vectors.ncols(), tol, scale);
        Ok(Self {
            field,
            basis: linalg::orth(vectors, field, cut),
            tol,
        })
    }

    /// Wraps a basis that is already orthonormal within `tol`.
    pub fn from_orthonormal(field: ScalarField, basis: CMatrix, tol: f64) -> Result<Self> {
        if !field.admits(&basis) {
            return Err(LinRelError::ImaginaryInRealField);
        }
        let defect = orthonormality_defect(&basis);
        if defect > tol.max(1e-12) {
            return Err(LinRelError::NotOrthonormal { defect });
        }
        Ok(Self { field, basis, tol })
    }

    /// Accepts an orthonormal basis as-is and orthonormalizes anything else.
    pub fn from_basis_or_span(field: ScalarField, basis: CMatrix, tol: f64) -> Result<Self> {
        if orthonormality_defect(&basis) <= 1e-12 {
            Self::from_orthonormal(field, basis, tol)
        } else {
            Self::span(field, &basis, tol)
        }
    }

    pub fn zero(field: ScalarField, ambient_dim: usize) -> Self {
        Self {
            field,
            basis: zeros(ambient_dim, 0),
            tol: DEFAULT_TOL,
        }
    }

    pub fn full(field: ScalarField, ambient_dim: usize) -> Self {
        Self {
            field,
            basis: identity(ambient_dim),
            tol: DEFAULT_TOL,
        }
    }

    pub(crate) fn from_parts(field: ScalarField, basis: CMatrix, tol: f64) -> Self {
        Self { field, basis, tol }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projector `B·B†`.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn complement(&self) -> Subspace {
        let kernel = linalg::null_space(&self.basis.adjoint(), self.field, self.tol);
        Self::from_parts(self.field, kernel, self.tol)
    }

    /// `‖(I − P)·V‖₂`, the distance of the columns of `vectors` from the subspace.
    pub fn residual_of(&self, vectors: &CMatrix) -> f64 {
        if vectors.ncols() == 0 {
            return 0.0;
        }
        let resid = vectors - &self.basis * (self.basis.adjoint() * vectors);
        linalg::spectral_norm(&resid, ScalarField::Complex)
    }

    fn check_compatible(&self, other: &Subspace, context: &'static str) -> Result<ScalarField> {
        let field = join_fields(self.field, other.field)?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinRelError::DimensionMismatch {
                context,
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(field)
    }

    fn joint_tol(&self, other: &Subspace) -> f64 {
        self.tol.max(other.tol)
    }

    /// `other ⊆ self` within tolerance.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other, "subspace containment")?;
        Ok(self.residual_of(&other.basis) <= self.joint_tol(other))
    }

    /// `‖P_self − P_other‖₂`: the sine of the largest principal angle when the
    /// dimensions agree, and 1 otherwise.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.check_compatible(other, "subspace distance")?;
        if self.dim() != other.dim() {
            return Ok(1.0);
        }
        Ok(self.residual_of(&other.basis).max(other.residual_of(&self.basis)).min(1.0))
    }

    /// Principal angles in radians, ascending.
    pub fn principal_angles(&self, other: &Subspace) -> Result<Vec<f64>> {
        self.check_compatible(other, "principal angles")?;
        let cross = self.basis.adjoint() * &other.basis;
        let mut angles: Vec<f64> = linalg::singular_values(&cross, ScalarField::Complex)
            .into_iter()
            .map(|s| s.clamp(-1.0, 1.0).acos())
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Ok(angles)
    }

    /// Equality: same dimension and largest principal angle within tolerance.
    pub fn approx_eq(&self, other: &Subspace) -> Result<bool> {
        Ok(self.distance(other)? <= self.joint_tol(other))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        let field = self.check_compatible(other, "subspace intersection")?;
        let tol = self.joint_tol(other);
        let stacked = hstack(&self.basis, &(-&other.basis));
        let kernel = linalg::null_space(&stacked, field, linalg::cutoff(stacked.nrows(), stacked.ncols(), tol, 1.0));
        let coeffs = kernel.rows(0, self.dim()).into_owned();
        let vectors = &self.basis * coeffs;
        Ok(Self::from_parts(
            field,
            linalg::orth(&vectors, field, linalg::cutoff(vectors.nrows(), vectors.ncols(), tol, 1.0)),
            tol,
        ))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let field = self.check_compatible(other, "subspace sum")?;
        let tol = self.joint_tol(other);
        let stacked = hstack(&self.basis, &other.basis);
        Ok(Self::from_parts(
            field,
            linalg::orth(&stacked, field, linalg::cutoff(stacked.nrows(), stacked.ncols(), tol, 1.0)),
            tol,
        ))
    }

    /// `map(self)` for a matrix acting on the ambient space.
    pub fn image(&self, map: &CMatrix) -> Result<Subspace> {
        self.check_map(map, map.ncols())?;
        let vectors = map * &self.basis;
        let scale = linalg::spectral_norm(map, self.field);
        Ok(Self::from_parts(
            self.field,
            linalg::orth(&vectors, self.field, linalg::cutoff(vectors.nrows(), vectors.ncols(), self.tol, scale)),
            self.tol,
        ))
    }

    /// `{x : map·x ∈ self}`.
    pub fn preimage(&self, map: &CMatrix) -> Result<Subspace> {
        self.check_map(map, map.nrows())?;
        let projected = map - &self.basis * (self.basis.adjoint() * map);
        let scale = linalg::spectral_norm(map, self.field);
        let kernel = linalg::null_space(
            &projected,
            self.field,
            linalg::cutoff(projected.nrows(), projected.ncols(), self.tol, scale),
        );
        Ok(Self::from_parts(self.field, kernel, self.tol))
    }

    fn check_map(&self, map: &CMatrix, touching_dim: usize) -> Result<()> {
        if !self.field.admits(map) {
            return Err(LinRelError::ImaginaryInRealField);
        }
        if touching_dim != self.ambient_dim() {
            return Err(LinRelError::DimensionMismatch {
                context: "linear map on subspace",
                expected: self.ambient_dim(),
                found: touching_dim,
            });
        }
        Ok(())
    }
}

pub(crate) fn orthonormality_defect(basis: &CMatrix) -> f64 {
    let k = basis.ncols();
    (basis.adjoint() * basis - identity(k)).norm()
}
