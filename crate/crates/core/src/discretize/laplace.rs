use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::field::{re, CMatrix, Scalar, ScalarField, DEFAULT_TOL};
use crate::graph::MetricGraph;
use crate::linrel::{BoundarySystem, LagrangianData, SesquilinearForm};

use super::{build_trace_operators, ConstrainedBasis, DiscretizeError, Grids, Result, SparseRow, TraceOperators, Truncation};

/// Triplets of `A = K + T†·Sd`, where `K = D₁†·W·D₁` is the stiffness form.
///
/// `f†·A·g` approximates `⟨−g″, f⟩` including the boundary term of the
/// integration by parts, so `A† − A = Sd†·T − T†·Sd` is exactly the Gram
/// matrix of the standard skew form pulled back through `[T; Sd]`.
pub fn laplace_form(grids: &Grids, ops: &TraceOperators) -> Vec<(usize, usize, Scalar)> {
    let mut out = Vec::new();
    for grid in grids.edges() {
        let c = 1.0 / grid.h;
        for j in grid.first()..grid.last() {
            out.push((j, j, re(c)));
            out.push((j + 1, j + 1, re(c)));
            out.push((j, j + 1, re(-c)));
            out.push((j + 1, j, re(-c)));
        }
    }
    for (t, sd) in ops.t.iter().zip(&ops.sd) {
        for &(i, ti) in &t.entries {
            for &(j, sj) in &sd.entries {
                out.push((i, j, ti.conj() * sj));
            }
        }
    }
    out
}

/// Rows of `C` with `ker C` the discrete domain: `X⊥†·T f = 0`,
/// `L·X†·T f − X†·Sd f = 0` and `f = 0` at artificial endpoints.
pub fn laplace_constraints(g: &MetricGraph, grids: &Grids, ops: &TraceOperators, data: &LagrangianData) -> Result<Vec<SparseRow>> {
    let m = ops.t.len();
    if data.x().ambient_dim() != m {
        return Err(DiscretizeError::Shape(format!(
            "boundary data lives on {} coordinates, the graph has |E′| = {m}",
            data.x().ambient_dim()
        )));
    }
    let xb = data.x().basis();
    let perp = data.x().complement();
    let mut rows = Vec::with_capacity(m);
    for i in 0..perp.dim() {
        rows.push(SparseRow::combine(&ops.t, (0..m).map(|p| perp.basis()[(p, i)].conj())));
    }
    let lx = data.l() * xb.adjoint();
    for i in 0..xb.ncols() {
        let value = SparseRow::combine(&ops.t, (0..m).map(|p| lx[(i, p)]));
        let deriv = SparseRow::combine(&ops.sd, (0..m).map(|p| -xb[(p, i)].conj()));
        rows.push(SparseRow::combine(&[value, deriv], [re(1.0), re(1.0)]));
    }
    rows.extend(grids.artificial_dirichlet_points(g).into_iter().map(SparseRow::unit));
    Ok(rows)
}

/// The discrete Laplace boundary system: `Ω = A† − A` on grid values, `F = [T; Sd]`
/// and the standard skew form on `ℓ2(E′) ⊕ ℓ2(E′)`. Dense in `N`; meant for
/// verification at moderate sizes.
pub fn laplace_boundary_system(g: &MetricGraph, grids: &Grids, field: ScalarField) -> Result<BoundarySystem> {
    let ops = build_trace_operators(g, grids)?;
    let t = ops.t_dense();
    let sd = ops.sd_dense();
    let omega_big = sd.adjoint() * &t - t.adjoint() * &sd;
    let m = ops.t.len();
    let f = crate::field::vstack(&t, &sd);
    let big = SesquilinearForm::new(field, omega_big)?;
    Ok(BoundarySystem::new(big, f, SesquilinearForm::standard_skew(field, m), (m, m))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceSpectrum {
    /// The smallest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Relative pencil residuals `‖Av − λBv‖ / max(‖Av‖, |λ|·‖Bv‖)`.
    pub residuals: Vec<f64>,
    /// `‖Z†AZ − (Z†AZ)†‖_F / ‖Z†AZ‖_F`.
    pub symmetry_residual: f64,
    /// `10·h_max`.
    pub symmetry_bound: f64,
    pub constraint_count: usize,
    pub constraint_rank: usize,
    pub rank_deficient: bool,
    pub constrained_dim: usize,
    pub h_max: f64,
    pub truncations: Vec<Truncation>,
}

impl LaplaceSpectrum {
    pub fn symmetric_within_bound(&self) -> bool {
        self.symmetry_residual <= self.symmetry_bound
    }
}

/// The projected pencil `(Z†AZ, Z†WZ)` of a Laplacian with boundary data `(X, L)`.
#[derive(Debug, Clone)]
pub struct LaplacePencil {
    pub stiffness: CMatrix,
    pub mass: CMatrix,
    pub basis: ConstrainedBasis,
    pub field: ScalarField,
    pub h_max: f64,
}

impl LaplacePencil {
    pub fn new(g: &MetricGraph, grids: &Grids, data: &LagrangianData) -> Result<Self> {
        grids.check_matches(g)?;
        grids.check_size()?;
        let ops = build_trace_operators(g, grids)?;
        let rows = laplace_constraints(g, grids, &ops, data)?;
        let field = data.x().field();
        let basis = ConstrainedBasis::new(&rows, grids.total_points(), field, DEFAULT_TOL);
        let stiffness = basis.project(&laplace_form(grids, &ops));
        let mass = basis.project_diagonal(&grids.weights());
        Ok(Self {
            stiffness,
            mass,
            basis,
            field,
            h_max: grids.h_max(),
        })
    }

    pub fn symmetry_residual(&self) -> f64 {
        let a = &self.stiffness;
        let norm = a.norm();
        if norm == 0.0 {
            0.0
        } else {
            (a - a.adjoint()).norm() / norm
        }
    }

    /// `B^{−1/2}`: diagonal on the free block, dense on the small touched block.
    fn inverse_sqrt_mass(&self) -> Result<InverseSqrt> {
        let d = self.mass.nrows();
        let f = self.basis.free_count();
        let diag = (0..f).map(|i| 1.0 / self.mass[(i, i)].re.sqrt()).collect();
        let r = d - f;
        if r == 0 {
            return Ok(InverseSqrt {
                diag,
                block: CMatrix::zeros(0, 0),
            });
        }
        let block = self.mass.view((f, f), (r, r)).into_owned();
        let block = (&block + block.adjoint()) * re(0.5);
        let eig = SymmetricEigen::new(block);
        if eig.eigenvalues.iter().any(|&mu| mu <= 0.0) {
            return Err(DiscretizeError::Numerical("mass matrix is not positive definite".into()));
        }
        let scale = CMatrix::from_diagonal(&eig.eigenvalues.map(|mu| re(1.0 / mu.sqrt())));
        let block = &eig.eigenvectors * scale * eig.eigenvectors.adjoint();
        Ok(InverseSqrt { diag, block })
    }

    /// `B^{−1/2}·A·B^{−1/2}` without symmetrization.
    pub fn standardized(&self) -> Result<CMatrix> {
        let s = self.inverse_sqrt_mass()?;
        Ok(s.left(&s.right(&self.stiffness)))
    }

    /// The `k` smallest eigenvalues with pencil residuals.
    pub fn smallest(&self, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.stiffness.nrows();
        if k > d {
            return Err(DiscretizeError::TooManyEigenvalues { requested: k, available: d });
        }
        if k == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let s = self.inverse_sqrt_mass()?;
        let c = s.left(&s.right(&self.stiffness));
        let c = (&c + c.adjoint()) * re(0.5);
        let (values, vectors) = hermitian_eigen(&c, self.field);
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut eigenvalues = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        for &i in order.iter().take(k) {
            let lambda = values[i];
            let v = s.left(&vectors.columns(i, 1).into_owned());
            let av = &self.stiffness * &v;
            let bv = &self.mass * &v;
            let res = (&av - &bv * re(lambda)).norm();
            let denom = av.norm().max(lambda.abs() * bv.norm()).max(f64::MIN_POSITIVE);
            eigenvalues.push(lambda);
            residuals.push(res / denom);
        }
        Ok((eigenvalues, residuals))
    }
}

/// Block-diagonal `B^{−1/2}` of a projected mass matrix.
struct InverseSqrt {
    diag: Vec<f64>,
    block: CMatrix,
}

impl InverseSqrt {
    /// `S·M`.
    fn left(&self, m: &CMatrix) -> CMatrix {
        let f = self.diag.len();
        let r = self.block.nrows();
        let mut out = m.clone();
        for (i, &d) in self.diag.iter().enumerate() {
            out.row_mut(i).iter_mut().for_each(|z| *z *= d);
        }
        if r > 0 {
            let tail = &self.block * m.rows(f, r);
            out.rows_mut(f, r).copy_from(&tail);
        }
        out
    }

    /// `M·S` (`S` is Hermitian).
    fn right(&self, m: &CMatrix) -> CMatrix {
        let f = self.diag.len();
        let r = self.block.nrows();
        let mut out = m.clone();
        for (j, &d) in self.diag.iter().enumerate() {
            out.column_mut(j).iter_mut().for_each(|z| *z *= d);
        }
        if r > 0 {
            let tail = m.columns(f, r) * &self.block;
            out.columns_mut(f, r).copy_from(&tail);
        }
        out
    }
}

/// Eigen-decomposition of a Hermitian matrix, in real arithmetic when possible.
pub(crate) fn hermitian_eigen(c: &CMatrix, field: ScalarField) -> (Vec<f64>, CMatrix) {
    if field.is_real() {
        let real: DMatrix<f64> = c.map(|z| z.re);
        let eig = SymmetricEigen::new(real);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(re))
    } else {
        let eig = SymmetricEigen::new(c.clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    }
}

/// The `k` smallest eigenvalues of the FD Laplacian with boundary data `(X, L)`.
pub fn assemble_laplacian_eig(g: &MetricGraph, grids: &Grids, data: &LagrangianData, k: usize) -> Result<LaplaceSpectrum> {
    let pencil = LaplacePencil::new(g, grids, data)?;
    let (eigenvalues, residuals) = pencil.smallest(k)?;
    Ok(LaplaceSpectrum {
        eigenvalues,
        residuals,
        symmetry_residual: pencil.symmetry_residual(),
        symmetry_bound: 10.0 * pencil.h_max,
        constraint_count: pencil.basis.constraint_count,
        constraint_rank: pencil.basis.constraint_rank,
        rank_deficient: pencil.basis.rank_deficient(),
        constrained_dim: pencil.basis.dim(),
        h_max: pencil.h_max,
        truncations: grids.truncations().to_vec(),
    })
}
