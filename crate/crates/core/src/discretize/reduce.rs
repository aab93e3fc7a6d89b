//! Orthonormal kernel bases of sparse boundary constraints.
//!
//! The constraints only touch a few columns per edge end. The kernel is then
//! `span{e_i : i free} ⊕ ker C_J`, where `C_J` is the small dense block of the
//! touched columns `J`, so no dense `N × N` matrix is ever formed.

use crate::field::{re, CMatrix, Scalar, ScalarField};
use crate::linalg;

use super::SparseRow;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Free(usize),
    Touched(usize),
}

/// `Z = blockdiag(I_free, K)` after reordering, with `K` an orthonormal basis
/// of `ker C_J`.
#[derive(Debug, Clone)]
pub struct ConstrainedBasis {
    n: usize,
    slots: Vec<Slot>,
    free: Vec<usize>,
    k: CMatrix,
    pub constraint_count: usize,
    pub constraint_rank: usize,
}

impl ConstrainedBasis {
    pub fn new(rows: &[SparseRow], n: usize, field: ScalarField, tol: f64) -> Self {
        let mut is_touched = vec![false; n];
        for row in rows {
            for &(j, _) in &row.entries {
                is_touched[j] = true;
            }
        }
        let mut slots = Vec::with_capacity(n);
        let (mut free, mut touched) = (Vec::new(), Vec::new());
        for (j, &t) in is_touched.iter().enumerate() {
            if t {
                slots.push(Slot::Touched(touched.len()));
                touched.push(j);
            } else {
                slots.push(Slot::Free(free.len()));
                free.push(j);
            }
        }
        // Rows are normalized so that value and derivative constraints weigh alike.
        let mut cj = CMatrix::zeros(rows.len(), touched.len());
        for (i, row) in rows.iter().enumerate() {
            let norm = row.norm();
            if norm == 0.0 {
                continue;
            }
            for &(j, c) in &row.entries {
                if let Slot::Touched(p) = slots[j] {
                    cj[(i, p)] += c / norm;
                }
            }
        }
        let (k, rank) = if rows.is_empty() {
            (CMatrix::identity(touched.len(), touched.len()), 0)
        } else {
            let scale = linalg::spectral_norm(&cj, field);
            let cut = linalg::cutoff(cj.nrows(), cj.ncols(), tol, scale);
            let k = linalg::null_space(&cj, field, cut);
            let rank = touched.len() - k.ncols();
            (k, rank)
        };
        Self {
            n,
            slots,
            free,
            k,
            constraint_count: rows.len(),
            constraint_rank: rank,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Dimension of the constrained space.
    pub fn dim(&self) -> usize {
        self.free.len() + self.k.ncols()
    }

    pub fn rank_deficient(&self) -> bool {
        self.constraint_rank < self.constraint_count
    }

    /// Column `c` of `Z` restricted to global index `i`, as a sparse list.
    fn z_row(&self, i: usize) -> Vec<(usize, Scalar)> {
        match self.slots[i] {
            Slot::Free(p) => vec![(p, re(1.0))],
            Slot::Touched(p) => {
                let off = self.free.len();
                (0..self.k.ncols()).map(|c| (off + c, self.k[(p, c)])).collect()
            }
        }
    }

    /// `Z†·A·Z` for `A` given by triplets `(row, col, value)`.
    pub fn project(&self, triplets: &[(usize, usize, Scalar)]) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for &(i, j, v) in triplets {
            let zi = self.z_row(i);
            let zj = self.z_row(j);
            for &(a, za) in &zi {
                let left = za.conj() * v;
                for &(b, zb) in &zj {
                    out[(a, b)] += left * zb;
                }
            }
        }
        out
    }

    /// `Z†·diag(w)·Z`.
    pub fn project_diagonal(&self, w: &[f64]) -> CMatrix {
        let triplets: Vec<(usize, usize, Scalar)> = w.iter().enumerate().map(|(i, &x)| (i, i, re(x))).collect();
        self.project(&triplets)
    }

    /// Number of leading coordinates that are plain grid values.
    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Dense `N × dim` matrix `Z`; meant for small test problems.
    pub fn dense(&self) -> CMatrix {
        let mut z = CMatrix::zeros(self.n, self.dim());
        for i in 0..self.n {
            for (c, v) in self.z_row(i) {
                z[(i, c)] = v;
            }
        }
        z
    }

    /// Maps reduced coordinates back to grid values.
    pub fn expand(&self, coords: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, coords.ncols());
        for i in 0..self.n {
            for (c, v) in self.z_row(i) {
                for col in 0..coords.ncols() {
                    out[(i, col)] += v * coords[(c, col)];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::trace::dense;

    #[test]
    fn kernel_basis_is_orthonormal_and_annihilated() {
        let rows = vec![
            SparseRow::new(vec![(0, re(1.0)), (1, re(-1.0))]),
            SparseRow::new(vec![(4, re(3.0)), (5, re(1.0)), (6, re(2.0))]),
        ];
        let cb = ConstrainedBasis::new(&rows, 8, ScalarField::Real, 1e-10);
        let z = cb.dense();
        assert_eq!(cb.dim(), 6);
        assert!((z.adjoint() * &z - CMatrix::identity(6, 6)).norm() < 1e-12);
        assert!((dense(&rows, 8) * &z).norm() < 1e-12);
        assert!(!cb.rank_deficient());
    }

    #[test]
    fn duplicate_constraints_are_rank_deficient() {
        let rows = vec![SparseRow::unit(2), SparseRow::new(vec![(2, re(5.0))])];
        let cb = ConstrainedBasis::new(&rows, 4, ScalarField::Real, 1e-10);
        assert_eq!(cb.constraint_rank, 1);
        assert!(cb.rank_deficient());
        assert_eq!(cb.dim(), 3);
    }

    #[test]
    fn projection_matches_dense_product() {
        let rows = vec![SparseRow::new(vec![(1, re(1.0)), (2, Scalar::new(0.0, 1.0))])];
        let cb = ConstrainedBasis::new(&rows, 4, ScalarField::Complex, 1e-10);
        let triplets = vec![
            (0, 1, re(2.0)),
            (1, 2, Scalar::new(1.0, -1.0)),
            (3, 3, re(4.0)),
            (2, 0, re(-1.0)),
        ];
        let mut a = CMatrix::zeros(4, 4);
        for &(i, j, v) in &triplets {
            a[(i, j)] += v;
        }
        let z = cb.dense();
        assert!((cb.project(&triplets) - z.adjoint() * a * &z).norm() < 1e-12);
    }
}
