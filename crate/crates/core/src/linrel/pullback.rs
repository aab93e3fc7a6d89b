use serde::{Deserialize, Serialize};

use crate::field::{CMatrix, ScalarField};
use crate::linalg;

use super::{join_fields, LinRelError, Result, SesquilinearForm, Subspace};

/// `F⁻¹(V) = {x : F·x ∈ V}` for a surjective `F` intertwining `w1` and `w2`.
///
/// Self-orthogonality transfers both ways: `V` is `w2`-self-orthogonal
/// exactly when the result is `w1`-self-orthogonal.
pub fn pullback(v: &Subspace, f: &CMatrix, w1: &SesquilinearForm, w2: &SesquilinearForm) -> Result<Subspace> {
    let field = join_fields(v.field(), join_fields(w1.field(), w2.field())?)?;
    check_map_shape(f, w1, w2)?;
    if v.ambient_dim() != f.nrows() {
        return Err(LinRelError::DimensionMismatch {
            context: "target subspace of pullback",
            expected: f.nrows(),
            found: v.ambient_dim(),
        });
    }
    let tol = v.tol();
    let rank = map_rank(f, field, tol);
    if rank != f.nrows() {
        return Err(LinRelError::NotSurjective {
            rank,
            expected: f.nrows(),
        });
    }
    let residual = compatibility_residual(f, w1, w2);
    if residual > tol.max(1e-12) {
        return Err(LinRelError::IncompatibleForms { residual });
    }
    v.preimage(f)
}

fn check_map_shape(f: &CMatrix, w1: &SesquilinearForm, w2: &SesquilinearForm) -> Result<()> {
    if f.ncols() != w1.dim() {
        return Err(LinRelError::DimensionMismatch {
            context: "map domain vs source form",
            expected: w1.dim(),
            found: f.ncols(),
        });
    }
    if f.nrows() != w2.dim() {
        return Err(LinRelError::DimensionMismatch {
            context: "map codomain vs target form",
            expected: w2.dim(),
            found: f.nrows(),
        });
    }
    Ok(())
}

fn map_rank(f: &CMatrix, field: ScalarField, tol: f64) -> usize {
    let scale = linalg::spectral_norm(f, field);
    linalg::rank(f, field, linalg::cutoff(f.nrows(), f.ncols(), tol, scale))
}

/// `‖F†·G₂·F − G₁‖_F / max(1, ‖G₁‖_F)`.
fn compatibility_residual(f: &CMatrix, w1: &SesquilinearForm, w2: &SesquilinearForm) -> f64 {
    (f.adjoint() * w2.gram() * f - w1.gram()).norm() / w1.gram().norm().max(1.0)
}

/// Finite-dimensional boundary system: a form `Ω` upstairs, a boundary map
/// `F` onto `G₁ ⊕ G₂` and a form `ω` downstairs with `Ω = F†·ω·F`.
#[derive(Debug, Clone)]
pub struct BoundarySystem {
    pub big_form: SesquilinearForm,
    pub map: CMatrix,
    pub boundary_form: SesquilinearForm,
    pub split: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySystemReport {
    pub rank: usize,
    pub expected_rank: usize,
    pub surjective: bool,
    pub compatibility_residual: f64,
    pub compatible: bool,
}

impl BoundarySystemReport {
    pub fn passed(&self) -> bool {
        self.surjective && self.compatible
    }
}

impl BoundarySystem {
    pub fn new(big_form: SesquilinearForm, map: CMatrix, boundary_form: SesquilinearForm, split: (usize, usize)) -> Result<Self> {
        check_map_shape(&map, &big_form, &boundary_form)?;
        if split.0 + split.1 != map.nrows() {
            return Err(LinRelError::DimensionMismatch {
                context: "boundary split g1 + g2",
                expected: map.nrows(),
                found: split.0 + split.1,
            });
        }
        Ok(Self {
            big_form,
            map,
            boundary_form,
            split,
        })
    }

    /// Checks surjectivity of `F` and the compatibility `Ω = F†ωF` within `tol`.
    pub fn verify(&self, tol: f64) -> BoundarySystemReport {
        let field = if self.big_form.field() == ScalarField::Real && self.boundary_form.field() == ScalarField::Real {
            ScalarField::of(&self.map)
        } else {
            ScalarField::Complex
        };
        let rank = map_rank(&self.map, field, tol);
        let residual = compatibility_residual(&self.map, &self.big_form, &self.boundary_form);
        BoundarySystemReport {
            rank,
            expected_rank: self.map.nrows(),
            surjective: rank == self.map.nrows(),
            compatibility_residual: residual,
            compatible: residual <= tol,
        }
    }

    /// Pulls a boundary subspace back to the big space.
    pub fn pullback(&self, v: &Subspace) -> Result<Subspace> {
        pullback(v, &self.map, &self.big_form, &self.boundary_form)
    }
}
