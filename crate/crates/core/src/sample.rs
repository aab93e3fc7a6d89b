//! Random test data: matrices, subspaces and relations over either field.
//!
//! Used by the unit, property and acceptance tests and by the CLI's
//! self-test fixtures. All generators are deterministic for a seeded RNG.

use rand::Rng;

use crate::field::{CMatrix, Scalar, ScalarField, DEFAULT_TOL};
use crate::linrel::{Flavor, LagrangianData, LinearRelation, Subspace};

fn entry<R: Rng + ?Sized>(rng: &mut R, field: ScalarField) -> Scalar {
    let re = rng.random_range(-1.0..1.0);
    match field {
        ScalarField::Real => Scalar::new(re, 0.0),
        ScalarField::Complex => Scalar::new(re, rng.random_range(-1.0..1.0)),
    }
}

/// Entries uniform in `[−1, 1)` (real and imaginary parts independently).
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| entry(rng, field))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> CMatrix {
    let a = random_matrix(rng, field, n, n);
    (&a + a.adjoint()) * Scalar::new(0.5, 0.0)
}

pub fn random_skew_hermitian<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> CMatrix {
    let a = random_matrix(rng, field, n, n);
    (&a - a.adjoint()) * Scalar::new(0.5, 0.0)
}

/// The `Q` factor of a random square matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    random_matrix(rng, field, n, n).qr().q()
}

/// Span of `k` random vectors (almost surely of dimension `k`).
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize, k: usize) -> Subspace {
    let k = k.min(n);
    let q = random_unitary(rng, field, n);
    Subspace::from_orthonormal(field, q.columns(0, k).into_owned(), DEFAULT_TOL).expect("columns of a unitary")
}

/// A random relation of random dimension. A quarter of the draws contain a
/// nontrivial multivalued part on purpose.
pub fn random_relation<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n1: usize, n2: usize) -> LinearRelation {
    let n = n1 + n2;
    let k = rng.random_range(0..=n);
    let mut vectors = random_matrix(rng, field, n, k);
    if k > 0 && n1 > 0 && rng.random_bool(0.25) {
        vectors.view_mut((0, 0), (n1, 1)).fill(Scalar::new(0.0, 0.0));
    }
    let space = Subspace::span(field, &vectors, DEFAULT_TOL).expect("field-consistent data");
    LinearRelation::new(n1, n2, space).expect("dims add up")
}

pub fn random_square_relation<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> LinearRelation {
    random_relation(rng, field, n, n)
}

/// `(X, L)` with `dim X` uniform in `0..=n` and `L` of the requested flavor.
pub fn random_lagrangian_data<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize, flavor: Flavor) -> LagrangianData {
    let d = rng.random_range(0..=n);
    lagrangian_data_of_dim(rng, field, n, d, flavor)
}

pub fn lagrangian_data_of_dim<R: Rng + ?Sized>(
    rng: &mut R,
    field: ScalarField,
    n: usize,
    d: usize,
    flavor: Flavor,
) -> LagrangianData {
    let x = random_subspace(rng, field, n, d);
    let l = match flavor {
        Flavor::SelfAdjoint => random_hermitian(rng, field, d),
        Flavor::SkewSelfAdjoint => random_skew_hermitian(rng, field, d),
    };
    LagrangianData::new(x, l, flavor).expect("valid by construction")
}

pub fn random_self_adjoint_relation<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> LinearRelation {
    random_lagrangian_data(rng, field, n, Flavor::SelfAdjoint).compose()
}

pub fn random_skew_self_adjoint_relation<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> LinearRelation {
    random_lagrangian_data(rng, field, n, Flavor::SkewSelfAdjoint).compose()
}

pub fn random_unitary_relation<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> LinearRelation {
    LinearRelation::graph(field, &random_unitary(rng, field, n), DEFAULT_TOL).expect("square graph")
}

/// Random symmetric relation `M₀ ⊆ M₀*`: a random subspace of a random
/// self-adjoint relation.
pub fn random_symmetric_relation<R: Rng + ?Sized>(rng: &mut R, field: ScalarField, n: usize) -> LinearRelation {
    let sa = random_self_adjoint_relation(rng, field, n);
    let k = rng.random_range(0..=sa.dim());
    let coeffs = random_matrix(rng, field, sa.dim(), k);
    let space = Subspace::span(field, &(sa.space().basis() * coeffs), DEFAULT_TOL).expect("field-consistent data");
    LinearRelation::new(n, n, space).expect("dims add up")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::unitary_defect;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generators_respect_field_and_structure() {
        let mut rng = StdRng::seed_from_u64(1);
        for field in [ScalarField::Real, ScalarField::Complex] {
            let q = random_unitary(&mut rng, field, 4);
            assert!(field.admits(&q));
            assert!(unitary_defect(&q) < 1e-12);
            assert!(random_self_adjoint_relation(&mut rng, field, 3).is_self_adjoint().unwrap());
            assert!(random_skew_self_adjoint_relation(&mut rng, field, 3).is_skew_self_adjoint().unwrap());
            assert!(random_symmetric_relation(&mut rng, field, 3).is_symmetric().unwrap());
        }
    }
}
