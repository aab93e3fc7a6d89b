//! SVD-based rank, range and kernel computations.
//!
//! Matrices over the real field are decomposed in real arithmetic so that no
//! spurious imaginary parts appear in the resulting bases.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::field::{re, CMatrix, ScalarField};

/// Rank cutoff: `max(max(m, n)·ε, tol) · scale`.
pub fn cutoff(rows: usize, cols: usize, tol: f64, scale: f64) -> f64 {
    let eps_rule = rows.max(cols) as f64 * f64::EPSILON;
    eps_rule.max(tol) * scale
}

struct Decomposition {
    u: Option<CMatrix>,
    sigma: Vec<f64>,
    v: Option<CMatrix>,
}

fn svd_generic<T>(a: DMatrix<T>, want_u: bool, want_v: bool) -> (Option<DMatrix<T>>, DVector<f64>, Option<DMatrix<T>>)
where
    T: ComplexField<RealField = f64>,
{
    let svd = a.svd(want_u, want_v);
    let v = svd.v_t.map(|vt| vt.adjoint());
    (svd.u, svd.singular_values, v)
}

fn decompose(a: &CMatrix, field: ScalarField, want_u: bool, want_v: bool) -> Decomposition {
    if field.is_real() {
        let real = a.map(|z| z.re);
        let (u, s, v) = svd_generic(real, want_u, want_v);
        Decomposition {
            u: u.map(|m| m.map(re)),
            sigma: s.iter().copied().collect(),
            v: v.map(|m| m.map(re)),
        }
    } else {
        let (u, s, v) = svd_generic(a.clone(), want_u, want_v);
        Decomposition {
            u,
            sigma: s.iter().copied().collect(),
            v,
        }
    }
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix, field: ScalarField) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s = decompose(a, field, false, false).sigma;
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    s
}

pub fn spectral_norm(a: &CMatrix, field: ScalarField) -> f64 {
    singular_values(a, field).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `cutoff`.
pub fn rank(a: &CMatrix, field: ScalarField, cutoff: f64) -> usize {
    singular_values(a, field).iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of the column span, keeping directions with `σ > cutoff`.
pub fn orth(a: &CMatrix, field: ScalarField, cutoff: f64) -> CMatrix {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return CMatrix::zeros(m, 0);
    }
    let d = decompose(a, field, true, false);
    let u = d.u.expect("left singular vectors requested");
    let keep: Vec<usize> = (0..d.sigma.len()).filter(|&j| d.sigma[j] > cutoff).collect();
    CMatrix::from_fn(m, keep.len(), |i, j| u[(i, keep[j])])
}

/// Orthonormal basis of `{x : a·x = 0}`, treating `σ ≤ cutoff` as zero.
pub fn null_space(a: &CMatrix, field: ScalarField, cutoff: f64) -> CMatrix {
    let (m, n) = a.shape();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m == 0 {
        return CMatrix::identity(n, n);
    }
    // Pad to at least n rows so that the decomposition yields a full V.
    let padded = if m < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let d = decompose(&padded, field, false, true);
    let v = d.v.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..n).filter(|&j| d.sigma[j] <= cutoff).collect();
    CMatrix::from_fn(n, keep.len(), |i, j| v[(i, keep[j])])
}

/// Kernel with the cutoff taken relative to the largest singular value.
pub fn null_space_relative(a: &CMatrix, field: ScalarField, tol: f64) -> CMatrix {
    let scale = spectral_norm(a, field);
    null_space(a, field, cutoff(a.nrows(), a.ncols(), tol, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::identity;
    use num_complex::Complex64;

    #[test]
    fn kernel_of_wide_matrix() {
        let a = CMatrix::from_row_slice(1, 3, &[re(1.0), re(1.0), re(0.0)]);
        let k = null_space(&a, ScalarField::Real, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).norm() < 1e-14);
        assert!((k.adjoint() * &k - identity(2)).norm() < 1e-14);
    }

    #[test]
    fn kernel_of_tall_full_rank_matrix_is_trivial() {
        let a = CMatrix::from_row_slice(3, 2, &[re(1.0), re(0.0), re(0.0), re(1.0), re(1.0), re(1.0)]);
        assert_eq!(null_space(&a, ScalarField::Real, 1e-12).ncols(), 0);
    }

    #[test]
    fn complex_orth_keeps_span() {
        let i = Complex64::new(0.0, 1.0);
        let a = CMatrix::from_row_slice(2, 2, &[re(1.0), i, i, -re(1.0)]);
        // Second column is i times the first.
        let q = orth(&a, ScalarField::Complex, 1e-12);
        assert_eq!(q.ncols(), 1);
        let col = a.column(0).into_owned();
        let resid = &col - &q * (q.adjoint() * &col);
        assert!(resid.norm() < 1e-14);
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(null_space(&CMatrix::zeros(0, 3), ScalarField::Real, 0.0).ncols(), 3);
        assert_eq!(orth(&CMatrix::zeros(3, 0), ScalarField::Real, 0.0).shape(), (3, 0));
        assert!(singular_values(&CMatrix::zeros(0, 0), ScalarField::Real).is_empty());
    }
}
