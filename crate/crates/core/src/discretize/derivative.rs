use serde::{Deserialize, Serialize};

use crate::field::{re, vstack, CMatrix, Scalar, ScalarField, DEFAULT_TOL};
use crate::graph::{check_skew_coupling, MetricGraph};
use crate::linrel::{BoundarySystem, SesquilinearForm};

use super::{build_trace_operators, ConstrainedBasis, Grids, Result, SparseRow, TraceOperators};

/// Triplets of the summation-by-parts derivative form `Q` on each edge:
/// `f†·Q·g` approximates `⟨g′, f⟩` and `Q + Q†` is `−1` at every start point,
/// `+1` at every end point and zero elsewhere.
pub fn derivative_form(grids: &Grids) -> Vec<(usize, usize, Scalar)> {
    let mut out = Vec::new();
    for grid in grids.edges() {
        for j in grid.first()..grid.last() {
            out.push((j, j + 1, re(0.5)));
            out.push((j + 1, j, re(-0.5)));
        }
        out.push((grid.first(), grid.first(), re(-0.5)));
        out.push((grid.last(), grid.last(), re(0.5)));
    }
    out
}

/// Rows of `L·T_r f − T_l f = 0` plus `f = 0` at artificial endpoints.
pub fn derivative_constraints(g: &MetricGraph, grids: &Grids, ops: &TraceOperators, l: &CMatrix) -> Vec<SparseRow> {
    let mut rows: Vec<SparseRow> = (0..ops.t_left.len())
        .map(|i| {
            let lt = SparseRow::combine(&ops.t_right, (0..ops.t_right.len()).map(|j| l[(i, j)]));
            SparseRow::combine(&[lt, ops.t_left[i].clone()], [re(1.0), re(-1.0)])
        })
        .collect();
    rows.extend(grids.artificial_dirichlet_points(g).into_iter().map(SparseRow::unit));
    rows
}

/// The discrete derivative boundary system: `Ω = Q + Q†`, `F = [T_r; T_l]`
/// and the standard unitary form on `ℓ2(E_r) ⊕ ℓ2(E_l)`.
pub fn derivative_boundary_system(g: &MetricGraph, grids: &Grids, field: ScalarField) -> Result<BoundarySystem> {
    let ops = build_trace_operators(g, grids)?;
    let n = grids.total_points();
    let mut q = CMatrix::zeros(n, n);
    for (i, j, v) in derivative_form(grids) {
        q[(i, j)] += v;
    }
    let big = SesquilinearForm::new(field, &q + q.adjoint())?;
    let f = vstack(&super::trace::dense(&ops.t_right, n), &super::trace::dense(&ops.t_left, n));
    let (r, l) = (ops.t_right.len(), ops.t_left.len());
    Ok(BoundarySystem::new(big, f, SesquilinearForm::standard_unitary(field, r, l), (r, l))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    /// `‖Z†QZ + (Z†QZ)†‖_F / ‖Z†QZ‖_F`.
    pub skew_residual: f64,
    /// `10·h_max`.
    pub bound: f64,
    pub skew_passed: bool,
    /// Hermiticity defect of `−i·Z†QZ` (complex field only).
    pub dirac_residual: Option<f64>,
    pub dirac_passed: Option<bool>,
    pub constraint_count: usize,
    pub constraint_rank: usize,
    pub constrained_dim: usize,
    pub h_max: f64,
}

impl DerivativeReport {
    pub fn passed(&self) -> bool {
        self.skew_passed && self.dirac_passed.unwrap_or(true)
    }
}

/// Checks that the first-derivative form restricted to `L·tr_r f = tr_l f`
/// is skew-Hermitian.
pub fn assemble_derivative_check(g: &MetricGraph, grids: &Grids, l: &CMatrix, field: ScalarField) -> Result<DerivativeReport> {
    grids.check_matches(g)?;
    grids.check_size()?;
    check_skew_coupling(g, l, DEFAULT_TOL)?;
    let field = if field.admits(l) { field } else { ScalarField::Complex };
    let ops = build_trace_operators(g, grids)?;
    let rows = derivative_constraints(g, grids, &ops, l);
    let basis = ConstrainedBasis::new(&rows, grids.total_points(), field, DEFAULT_TOL);
    let q = basis.project(&derivative_form(grids));
    let norm = q.norm().max(f64::MIN_POSITIVE);
    let skew_residual = (&q + q.adjoint()).norm() / norm;
    let bound = 10.0 * grids.h_max();
    let dirac_residual = (field == ScalarField::Complex).then(|| {
        let dirac = &q * Scalar::new(0.0, -1.0);
        (&dirac - dirac.adjoint()).norm() / norm
    });
    Ok(DerivativeReport {
        skew_residual,
        bound,
        skew_passed: skew_residual <= bound,
        dirac_residual,
        dirac_passed: dirac_residual.map(|r| r <= bound),
        constraint_count: basis.constraint_count,
        constraint_rank: basis.constraint_rank,
        constrained_dim: basis.dim(),
        h_max: grids.h_max(),
    })
}
