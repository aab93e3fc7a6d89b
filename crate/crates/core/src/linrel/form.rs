use crate::field::{block2, identity, zeros, CMatrix, Scalar, ScalarField};
use crate::linalg;

use super::{join_fields, LinRelError, Result, Subspace};

/// Sesquilinear form `ω(x, y) = y†·G·x`: linear in the first argument and
/// conjugate-linear in the second.
#[derive(Debug, Clone, PartialEq)]
pub struct SesquilinearForm {
    field: ScalarField,
    gram: CMatrix,
}

impl SesquilinearForm {
    pub fn new(field: ScalarField, gram: CMatrix) -> Result<Self> {
        if gram.nrows() != gram.ncols() {
            return Err(LinRelError::DimensionMismatch {
                context: "Gram matrix must be square",
                expected: gram.nrows(),
                found: gram.ncols(),
            });
        }
        if !field.admits(&gram) {
            return Err(LinRelError::ImaginaryInRealField);
        }
        Ok(Self { field, gram })
    }

    /// Standard skew-symmetric form on `K^n ⊕ K^n`: `⟨x,v⟩ − ⟨y,u⟩`.
    pub fn standard_skew(field: ScalarField, n: usize) -> Self {
        let i = identity(n);
        let o = zeros(n, n);
        Self {
            field,
            gram: block2(&o, &(-&i), &i, &o),
        }
    }

    /// Standard symmetric form on `K^n ⊕ K^n`: `⟨x,v⟩ + ⟨y,u⟩`.
    pub fn standard_symmetric(field: ScalarField, n: usize) -> Self {
        let i = identity(n);
        let o = zeros(n, n);
        Self {
            field,
            gram: block2(&o, &i, &i, &o),
        }
    }

    /// Standard unitary form on `K^{n1} ⊕ K^{n2}`: `⟨x,u⟩ − ⟨y,v⟩`.
    pub fn standard_unitary(field: ScalarField, n1: usize, n2: usize) -> Self {
        let gram = CMatrix::from_fn(n1 + n2, n1 + n2, |i, j| {
            if i != j {
                Scalar::new(0.0, 0.0)
            } else if i < n1 {
                Scalar::new(1.0, 0.0)
            } else {
                Scalar::new(-1.0, 0.0)
            }
        });
        Self { field, gram }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn scaled(&self, factor: Scalar) -> Self {
        Self {
            field: if factor.im == 0.0 { self.field } else { ScalarField::Complex },
            gram: &self.gram * factor,
        }
    }

    pub fn eval(&self, x: &CMatrix, y: &CMatrix) -> Scalar {
        (y.adjoint() * &self.gram * x)[(0, 0)]
    }

    /// `G† = G` within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        (&self.gram - self.gram.adjoint()).norm() <= tol * self.gram.norm().max(1.0)
    }

    /// `G† = −G` within `tol`.
    pub fn is_skew_symmetric(&self, tol: f64) -> bool {
        (&self.gram + self.gram.adjoint()).norm() <= tol * self.gram.norm().max(1.0)
    }

    pub fn orthogonal_complement(&self, u: &Subspace) -> Result<Subspace> {
        form_orthogonal_complement(u, self)
    }
}

/// `U^{⊥ω} = {x : ω(x, u) = 0 for all u ∈ U}`, the kernel of `U†·G`.
pub fn form_orthogonal_complement(u: &Subspace, w: &SesquilinearForm) -> Result<Subspace> {
    let field = join_fields(u.field(), w.field())?;
    if u.ambient_dim() != w.dim() {
        return Err(LinRelError::DimensionMismatch {
            context: "form orthogonal complement",
            expected: w.dim(),
            found: u.ambient_dim(),
        });
    }
    let rows = u.basis().adjoint() * w.gram();
    let scale = linalg::spectral_norm(w.gram(), field);
    let kernel = linalg::null_space(&rows, field, linalg::cutoff(rows.nrows(), rows.ncols(), u.tol(), scale));
    Ok(Subspace::from_parts(field, kernel, u.tol()))
}

/// `U^{⊥ω} = U`.
pub fn is_self_orthogonal(u: &Subspace, w: &SesquilinearForm) -> Result<bool> {
    form_orthogonal_complement(u, w)?.approx_eq(u)
}

/// Self-orthogonality of `U` inside `container` under the restriction of `w`:
/// `U ⊆ container` and `U^{⊥ω} ∩ container = U`.
pub fn is_lagrangian_within(u: &Subspace, container: &Subspace, w: &SesquilinearForm) -> Result<bool> {
    if !container.contains(u)? {
        return Ok(false);
    }
    let restricted = form_orthogonal_complement(u, w)?.intersection(container)?;
    restricted.approx_eq(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{re, DEFAULT_TOL};

    fn vec2(a: f64, b: f64) -> CMatrix {
        CMatrix::from_column_slice(2, 1, &[re(a), re(b)])
    }

    #[test]
    fn standard_forms_evaluate_as_documented() {
        let (x, y, u, v) = (2.0, 3.0, 5.0, 7.0);
        let p = vec2(x, y);
        let q = vec2(u, v);
        let skew = SesquilinearForm::standard_skew(ScalarField::Real, 1);
        assert_eq!(skew.eval(&p, &q).re, x * v - y * u);
        let sym = SesquilinearForm::standard_symmetric(ScalarField::Real, 1);
        assert_eq!(sym.eval(&p, &q).re, x * v + y * u);
        let uni = SesquilinearForm::standard_unitary(ScalarField::Real, 1, 1);
        assert_eq!(uni.eval(&p, &q).re, x * u - y * v);
        assert!(skew.is_skew_symmetric(1e-15) && sym.is_symmetric(1e-15) && uni.is_symmetric(1e-15));
    }

    #[test]
    fn complement_of_full_space_is_zero() {
        let w = SesquilinearForm::standard_skew(ScalarField::Real, 1);
        let c = form_orthogonal_complement(&Subspace::full(ScalarField::Real, 2), &w).unwrap();
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn identity_graph_is_lagrangian() {
        let w = SesquilinearForm::standard_skew(ScalarField::Real, 1);
        let u = Subspace::span(ScalarField::Real, &vec2(1.0, 1.0), DEFAULT_TOL).unwrap();
        let c = form_orthogonal_complement(&u, &w).unwrap();
        assert!(c.approx_eq(&u).unwrap());
    }

    #[test]
    fn vertical_line_is_its_own_skew_complement() {
        // ω((0,y),(0,v)) = 0 for the standard skew form.
        let w = SesquilinearForm::standard_skew(ScalarField::Real, 1);
        let u = Subspace::span(ScalarField::Real, &vec2(0.0, 1.0), DEFAULT_TOL).unwrap();
        assert!(form_orthogonal_complement(&u, &w).unwrap().approx_eq(&u).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let w = SesquilinearForm::standard_skew(ScalarField::Real, 2);
        let err = form_orthogonal_complement(&Subspace::full(ScalarField::Real, 2), &w).unwrap_err();
        assert!(matches!(err, LinRelError::DimensionMismatch { .. }));
    }
}
