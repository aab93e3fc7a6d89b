use serde::{Deserialize, Serialize};

use crate::field::{block2, identity, CMatrix, Scalar, ScalarField};

use super::{LinRelError, LinearRelation, Result, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CayleyVariant {
    /// `C = 1/√2 [[1, 1], [−1, 1]]`, mapping skew-self-adjoint relations to unitary graphs.
    RealSkew,
    /// `C = 1/√2 [[1, −i], [−1, −i]]`, mapping self-adjoint relations to unitary graphs.
    ComplexSymmetric,
}

/// The `2n × 2n` block matrix of the variant.
pub fn cayley_matrix(variant: CayleyVariant, n: usize) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = identity(n);
    let (a, b, c, d) = match variant {
        CayleyVariant::RealSkew => (Scalar::new(h, 0.0), Scalar::new(h, 0.0), Scalar::new(-h, 0.0), Scalar::new(h, 0.0)),
        CayleyVariant::ComplexSymmetric => (
            Scalar::new(h, 0.0),
            Scalar::new(0.0, -h),
            Scalar::new(-h, 0.0),
            Scalar::new(0.0, -h),
        ),
    };
    block2(&(&i * a), &(&i * b), &(&i * c), &(&i * d))
}

/// `C·U`.
pub fn cayley_map(u: &LinearRelation, variant: CayleyVariant) -> Result<LinearRelation> {
    let (n1, n2) = u.dims();
    if n1 != n2 {
        return Err(LinRelError::NotSquare { n1, n2 });
    }
    if variant == CayleyVariant::ComplexSymmetric && u.field() != ScalarField::Complex {
        return Err(LinRelError::RequiresComplex("the Cayley map for self-adjoint relations"));
    }
    let c = cayley_matrix(variant, n1);
    let basis = c * u.space().basis();
    let space = Subspace::from_basis_or_span(u.field(), basis, u.tol())?;
    LinearRelation::new(n1, n2, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{re, DEFAULT_TOL};
    use crate::linrel::SesquilinearForm;
    use crate::sample;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn zero_operator_maps_to_minus_identity() {
        let u = LinearRelation::graph(ScalarField::Real, &CMatrix::zeros(2, 2), DEFAULT_TOL).unwrap();
        let cu = cayley_map(&u, CayleyVariant::RealSkew).unwrap();
        assert!((cu.as_operator().unwrap() + identity(2)).norm() < 1e-12);
    }

    #[test]
    fn skew_generator_maps_to_its_cayley_transform() {
        let a = CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(-1.0), re(0.0)]);
        let i = identity(2);
        // (A − I)(A + I)⁻¹ evaluated directly.
        let expected = (&a - &i) * (&a + &i).try_inverse().unwrap();
        let u = LinearRelation::graph(ScalarField::Real, &a, DEFAULT_TOL).unwrap();
        let cu = cayley_map(&u, CayleyVariant::RealSkew).unwrap();
        let got = cu.as_operator().unwrap();
        assert!((&got - &expected).norm() < 1e-12);
        assert!((got.adjoint() * &got - &i).norm() < 1e-12);
        assert!(cu.is_unitary());
    }

    #[test]
    fn hermitian_maps_to_complex_cayley_transform() {
        let mut rng = StdRng::seed_from_u64(5);
        let a = sample::random_hermitian(&mut rng, ScalarField::Complex, 3);
        let i = identity(3);
        let j = Scalar::new(0.0, 1.0);
        let expected = (&a - &i * j) * (&a + &i * j).try_inverse().unwrap();
        let u = LinearRelation::graph(ScalarField::Complex, &a, DEFAULT_TOL).unwrap();
        let got = cayley_map(&u, CayleyVariant::ComplexSymmetric).unwrap().as_operator().unwrap();
        assert!((got - expected).norm() < 1e-10);
    }

    #[test]
    fn complex_variant_needs_complex_field() {
        let u = LinearRelation::graph(ScalarField::Real, &identity(1), DEFAULT_TOL).unwrap();
        assert!(matches!(
            cayley_map(&u, CayleyVariant::ComplexSymmetric),
            Err(LinRelError::RequiresComplex(_))
        ));
    }

    #[test]
    fn cayley_matrix_intertwines_symmetric_and_unitary_forms() {
        let mut rng = StdRng::seed_from_u64(9);
        let n = 3;
        let c = cayley_matrix(CayleyVariant::RealSkew, n);
        assert!((c.adjoint() * &c - identity(2 * n)).norm() < 1e-14);
        let ws = SesquilinearForm::standard_symmetric(ScalarField::Complex, n);
        let wu = SesquilinearForm::standard_unitary(ScalarField::Complex, n, n);
        for _ in 0..20 {
            let p = sample::random_matrix(&mut rng, ScalarField::Complex, 2 * n, 1);
            let q = sample::random_matrix(&mut rng, ScalarField::Complex, 2 * n, 1);
            let lhs = ws.eval(&p, &q);
            let rhs = wu.eval(&(&c * &p), &(&c * &q));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
