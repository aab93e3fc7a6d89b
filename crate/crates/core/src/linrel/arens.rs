use serde::{Deserialize, Serialize};

use crate::field::{hermitian_defect, hstack, skew_hermitian_defect, unitary_defect, vstack, zeros, CMatrix};

use super::{is_self_orthogonal, LinRelError, LinearRelation, Result, SesquilinearForm, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `L` Hermitian; the relation is self-adjoint.
    SelfAdjoint,
    /// `L` skew-Hermitian; the relation is skew-self-adjoint.
    SkewSelfAdjoint,
}

/// A closed subspace `X` together with an operator `L` on it, written in the
/// orthonormal basis of `X`. Represents `G(L) ⊕ ({0} ⊕ X^⊥)`.
#[derive(Debug, Clone)]
pub struct LagrangianData {
    x: Subspace,
    l: CMatrix,
    flavor: Flavor,
}

impl LagrangianData {
    pub fn new(x: Subspace, l: CMatrix, flavor: Flavor) -> Result<Self> {
        if l.nrows() != x.dim() || l.ncols() != x.dim() {
            return Err(LinRelError::DimensionMismatch {
                context: "L must be dim X × dim X",
                expected: x.dim(),
                found: l.nrows().max(l.ncols()),
            });
        }
        if !x.field().admits(&l) {
            return Err(LinRelError::ImaginaryInRealField);
        }
        let (defect, expected) = match flavor {
            Flavor::SelfAdjoint => (hermitian_defect(&l), "Hermitian"),
            Flavor::SkewSelfAdjoint => (skew_hermitian_defect(&l), "skew-Hermitian"),
        };
        if defect > x.tol() {
            return Err(LinRelError::MatrixProperty { expected, defect });
        }
        Ok(Self { x, l, flavor })
    }

    pub fn x(&self) -> &Subspace {
        &self.x
    }

    pub fn l(&self) -> &CMatrix {
        &self.l
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `X_b·L·X_b†`: `L` extended by zero to the ambient space.
    pub fn ambient_operator(&self) -> CMatrix {
        let b = self.x.basis();
        b * &self.l * b.adjoint()
    }

    /// `{(x, L·x + w) : x ∈ X, w ∈ X^⊥}`.
    pub fn compose(&self) -> LinearRelation {
        let n = self.x.ambient_dim();
        let xb = self.x.basis();
        let perp = self.x.complement();
        let graph_part = vstack(xb, &(xb * &self.l));
        let vertical = vstack(&zeros(n, perp.dim()), perp.basis());
        let basis = hstack(&graph_part, &vertical);
        LinearRelation::new(n, n, Subspace::span(self.x.field(), &basis, self.x.tol()).expect("field already checked"))
            .expect("square by construction")
    }
}

/// Splits a self-adjoint (or skew-self-adjoint) relation into its operator
/// part on `X = H∞^⊥` and its purely multivalued part `{0} ⊕ H∞`.
pub fn arens_decompose(u: &LinearRelation, flavor: Flavor) -> Result<LagrangianData> {
    let (n1, n2) = u.dims();
    if n1 != n2 {
        return Err(LinRelError::NotSquare { n1, n2 });
    }
    let ok = match flavor {
        Flavor::SelfAdjoint => u.is_self_adjoint()?,
        Flavor::SkewSelfAdjoint => u.is_skew_self_adjoint()?,
    };
    if !ok {
        return Err(LinRelError::Classification {
            expected: match flavor {
                Flavor::SelfAdjoint => "self-adjoint",
                Flavor::SkewSelfAdjoint => "skew-self-adjoint",
            },
        });
    }
    let field = u.field();
    let tol = u.tol();
    let h_inf = u.multivalued_part();
    let x = h_inf.complement();
    let xb = x.basis();

    // G = U ∩ (X ⊕ X), expressed through its pairs (g1, g2).
    let block = vstack(&hstack(xb, &zeros(n1, x.dim())), &hstack(&zeros(n1, x.dim()), xb));
    let x_plus_x = Subspace::from_parts(field, block, tol);
    let g = u.space().intersection(&x_plus_x)?;
    if g.dim() != x.dim() {
        return Err(LinRelError::Inconsistent(format!(
            "operator part has dimension {} but X has dimension {}",
            g.dim(),
            x.dim()
        )));
    }
    let g1 = g.basis().rows(0, n1).into_owned();
    let g2 = g.basis().rows(n1, n1).into_owned();
    let a = xb.adjoint() * g1;
    let b = xb.adjoint() * g2;
    let a_inv = a
        .try_inverse()
        .ok_or_else(|| LinRelError::Inconsistent("operator part is not a graph over X".into()))?;
    let l = b * a_inv;
    // Remove the rounding-level anti-part so the flavor invariant holds exactly.
    let l = match flavor {
        Flavor::SelfAdjoint => (&l + l.adjoint()) * crate::field::re(0.5),
        Flavor::SkewSelfAdjoint => (&l - l.adjoint()) * crate::field::re(0.5),
    };
    LagrangianData::new(x, l, flavor)
}

/// `arens_compose(data, n)`; `n` must be the ambient dimension of `X`.
pub fn arens_compose(data: &LagrangianData, n: usize) -> Result<LinearRelation> {
    if data.x.ambient_dim() != n {
        return Err(LinRelError::DimensionMismatch {
            context: "ambient dimension of X",
            expected: n,
            found: data.x.ambient_dim(),
        });
    }
    Ok(data.compose())
}

/// Recovers the unitary `L` from a relation that is self-orthogonal under the
/// standard unitary form.
pub fn unitary_extract(u: &LinearRelation) -> Result<CMatrix> {
    let (n1, n2) = u.dims();
    let form = SesquilinearForm::standard_unitary(u.field(), n1, n2);
    if !is_self_orthogonal(u.space(), &form)? {
        let distance = form.orthogonal_complement(u.space())?.distance(u.space())?;
        return Err(LinRelError::NotSelfOrthogonal { distance });
    }
    if n1 != n2 {
        return Err(LinRelError::Inconsistent(format!(
            "self-orthogonal under the unitary form but dims ({n1}, {n2}) differ"
        )));
    }
    let l = u.as_operator()?;
    let defect = unitary_defect(&l);
    if defect > u.tol().max(1e-12) * (n1.max(1) as f64) {
        return Err(LinRelError::MatrixProperty {
            expected: "unitary",
            defect,
        });
    }
    Ok(l)
}
