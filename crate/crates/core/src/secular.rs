//! Exact Laplacian eigenvalues on compact metric graphs.
//!
//! On every edge a solution of `−f″ = λf` is a combination of two basis
//! solutions. The boundary conditions `X⊥†·tr f = 0` and
//! `L·X†·tr f − X†·str f′ = 0` then form a square linear system in the
//! `2|E|` coefficients, which is singular exactly at the eigenvalues.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{re, CMatrix, Scalar, ScalarField};
use crate::graph::{BoundaryIndex, GraphError, MetricGraph};
use crate::linalg;
use crate::linrel::{LagrangianData, LinRelError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SecularError {
    #[error("the secular equation needs a compact graph; edges {0:?} are unbounded")]
    NonCompact(Vec<String>),
    #[error("boundary data has ambient dimension {found}, the graph has |E′| = {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid scan option: {0}")]
    InvalidOption(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    LinRel(#[from] LinRelError),
}

pub type Result<T> = std::result::Result<T, SecularError>;

/// `|λ|·len²` below which the power series replaces the closed forms.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Values and derivatives of `c` and `s` at `x = 0` and `x = len`, where
/// `−c″ = λc`, `c(0) = 1`, `c′(0) = 0` and `−s″ = λs`, `s(0) = 0`, `s′(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFundamental {
    pub c: [Scalar; 2],
    pub dc: [Scalar; 2],
    pub s: [Scalar; 2],
    pub ds: [Scalar; 2],
}

pub fn edge_fundamental(lambda: Scalar, len: f64) -> EdgeFundamental {
    let one = re(1.0);
    let zero = re(0.0);
    let (c, dc, s, ds) = if lambda.norm() * len * len < SERIES_THRESHOLD {
        series(lambda, len)
    } else {
        let k = lambda.sqrt();
        let (sin, cos) = ((k * len).sin(), (k * len).cos());
        (cos, -k * sin, sin / k, cos)
    };
    EdgeFundamental {
        c: [one, c],
        dc: [zero, dc],
        s: [zero, s],
        ds: [one, ds],
    }
}

/// Taylor polynomials of `c, c′, s, s′` through the `λ²` terms.
fn series(lambda: Scalar, x: f64) -> (Scalar, Scalar, Scalar, Scalar) {
    let l2 = lambda * lambda;
    let (x2, x3, x4, x5) = (x * x, x.powi(3), x.powi(4), x.powi(5));
    let c = re(1.0) - lambda * (x2 / 2.0) + l2 * (x4 / 24.0);
    let dc = -lambda * x + l2 * (x3 / 6.0);
    let s = re(x) - lambda * (x3 / 6.0) + l2 * (x5 / 120.0);
    (c, dc, s, c)
}

/// Values and derivatives at `(a, b)` of the two basis solutions on one edge.
#[derive(Debug, Clone, Copy)]
struct EdgeBasis {
    value: [[Scalar; 2]; 2],
    deriv: [[Scalar; 2]; 2],
}

/// `(c, s)` for moderate `λ`; for strongly negative `λ` the decaying pair
/// `e^{−κ(x−a)}`, `e^{−κ(b−x)}` with `κ = √(−λ)`, which stays well conditioned
/// where `cosh` and `sinh` overflow or cancel.
fn edge_basis(lambda: Scalar, len: f64) -> EdgeBasis {
    let kappa = (-lambda).sqrt();
    if kappa.re * len > 1.0 {
        let decay = (-kappa * len).exp();
        let one = re(1.0);
        EdgeBasis {
            value: [[one, decay], [decay, one]],
            deriv: [[-kappa, -kappa * decay], [kappa * decay, kappa]],
        }
    } else {
        let f = edge_fundamental(lambda, len);
        EdgeBasis {
            value: [f.c, f.s],
            deriv: [f.dc, f.ds],
        }
    }
}

/// One eigenvalue found by [`SecularProblem::eigenvalue_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularEigenvalue {
    pub lambda: f64,
    pub multiplicity: usize,
    /// Relative `σ_min` at the refined point, see [`SecularProblem::objective`].
    pub relative_sigma_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub lower: f64,
    pub upper: f64,
    /// Number of grid points in `[lower, upper]`.
    pub points: usize,
    /// Refined points with relative `σ_min ≤ accept` count as eigenvalues.
    pub accept: f64,
    /// Relative singular values `≤ multiplicity` are counted for the multiplicity.
    pub multiplicity: f64,
    /// Golden-section stops at `|Δλ| ≤ refine·(1 + |λ|)`.
    pub refine: f64,
}

impl ScanOptions {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            points: 2000,
            accept: 1e-8,
            multiplicity: 1e-6,
            refine: 1e-10,
        }
    }

    pub fn with_points(self, points: usize) -> Self {
        Self { points, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return Err(SecularError::InvalidOption(format!(
                "scan range [{}, {}] is empty or not finite",
                self.lower, self.upper
            )));
        }
        if self.points < 3 {
            return Err(SecularError::InvalidOption(format!("need at least 3 scan points, got {}", self.points)));
        }
        Ok(())
    }

    /// The scan points, `lower` and `upper` included.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.upper - self.lower) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.upper } else { self.lower + i as f64 * step })
            .collect()
    }
}

/// Boundary data `(X, L)` on a compact graph, prepared for secular evaluations.
#[derive(Debug, Clone)]
pub struct SecularProblem {
    lengths: Vec<f64>,
    entries: Vec<(usize, u8)>,
    perp: CMatrix,
    xb: CMatrix,
    l: CMatrix,
    field: ScalarField,
    /// `‖[[X⊥†, 0], [L·X†, −X†]]‖₂`, the reference scale for singular values.
    scale: f64,
}

impl SecularProblem {
    pub fn new(g: &MetricGraph, data: &LagrangianData) -> Result<Self> {
        let unbounded: Vec<String> = g.edges().iter().filter(|e| !e.is_compact()).map(|e| e.id.clone()).collect();
        if !unbounded.is_empty() {
            return Err(SecularError::NonCompact(unbounded));
        }
        let index = BoundaryIndex::new(g);
        if data.x().ambient_dim() != index.len() {
            return Err(SecularError::Dimension {
                expected: index.len(),
                found: data.x().ambient_dim(),
            });
        }
        let perp = data.x().complement().basis().clone();
        let xb = data.x().basis().clone();
        let m = index.len();
        let mut rows = CMatrix::zeros(m, 2 * m);
        rows.view_mut((0, 0), (perp.ncols(), m)).copy_from(&perp.adjoint());
        rows.view_mut((perp.ncols(), 0), (xb.ncols(), m)).copy_from(&(data.l() * xb.adjoint()));
        rows.view_mut((perp.ncols(), m), (xb.ncols(), m)).copy_from(&(-xb.adjoint()));
        let scale = linalg::spectral_norm(&rows, ScalarField::Complex);
        Ok(Self {
            scale,
            lengths: g.edges().iter().map(|e| e.length()).collect(),
            entries: index.entries().to_vec(),
            perp,
            xb,
            l: data.l().clone(),
            field: data.x().field(),
        })
    }

    /// Size of the square secular matrix, `2|E|`.
    pub fn size(&self) -> usize {
        2 * self.lengths.len()
    }

    /// `M(λ)` for basis solutions normalized by their trace data.
    pub fn matrix(&self, lambda: Scalar) -> CMatrix {
        let m = self.entries.len();
        let n = self.size();
        let bases: Vec<EdgeBasis> = self.lengths.iter().map(|&len| edge_basis(lambda, len)).collect();
        let mut tr = CMatrix::zeros(m, n);
        let mut str = CMatrix::zeros(m, n);
        for (p, &(e, flag)) in self.entries.iter().enumerate() {
            let b = &bases[e];
            let end = flag as usize;
            let sign = if flag == 0 { 1.0 } else { -1.0 };
            for k in 0..2 {
                tr[(p, 2 * e + k)] = b.value[k][end];
                str[(p, 2 * e + k)] = b.deriv[k][end] * sign;
            }
        }
        // Each basis solution is scaled by the norm of its full trace data, so
        // the scaling does not depend on the boundary condition.
        for c in 0..n {
            let norm = (tr.column(c).norm_squared() + str.column(c).norm_squared()).sqrt();
            if norm > 0.0 {
                tr.column_mut(c).iter_mut().for_each(|z| *z /= norm);
                str.column_mut(c).iter_mut().for_each(|z| *z /= norm);
            }
        }
        let rows_perp = self.perp.adjoint() * &tr;
        let rows_x = &self.l * self.xb.adjoint() * &tr - self.xb.adjoint() * &str;
        crate::field::vstack(&rows_perp, &rows_x)
    }

    /// Singular values of `M(λ)` divided by the boundary-row scale, descending.
    ///
    /// `‖M(λ)‖` itself is not a usable reference: at an eigenvalue whose
    /// multiplicity equals `2|E|` the whole matrix vanishes.
    pub fn relative_singular_values(&self, lambda: Scalar) -> Vec<f64> {
        let m = self.matrix(lambda);
        let field = if lambda.im == 0.0 { self.field } else { ScalarField::Complex };
        linalg::singular_values(&m, field).into_iter().map(|x| x / self.scale).collect()
    }

    /// `σ_min(M(λ))` relative to the boundary-row scale.
    pub fn objective(&self, lambda: Scalar) -> f64 {
        self.relative_singular_values(lambda).last().copied().unwrap_or(0.0)
    }

    /// `(λ, σ_min)` over the scan grid, evaluated in parallel.
    pub fn scan_curve(&self, opts: &ScanOptions) -> Result<Vec<(f64, f64)>> {
        opts.validate()?;
        Ok(opts.grid().into_par_iter().map(|x| (x, self.objective(re(x)))).collect())
    }

    /// Local minima of the scan curve refined by golden-section search.
    pub fn eigenvalue_scan(&self, opts: &ScanOptions) -> Result<Vec<SecularEigenvalue>> {
        let curve = self.scan_curve(opts)?;
        let n = curve.len();
        let brackets: Vec<(f64, f64)> = (0..n)
            .filter(|&i| {
                let left = i == 0 || curve[i].1 <= curve[i - 1].1;
                let right = i + 1 == n || curve[i].1 <= curve[i + 1].1;
                left && right
            })
            .map(|i| (curve[i.saturating_sub(1)].0, curve[(i + 1).min(n - 1)].0))
            .collect();
        let mut found: Vec<SecularEigenvalue> = brackets
            .into_par_iter()
            .filter_map(|(lo, hi)| {
                let lambda = self.golden_section(lo, hi, opts.refine);
                let sv = self.relative_singular_values(re(lambda));
                let sigma = sv.last().copied().unwrap_or(0.0);
                (sigma <= opts.accept).then(|| SecularEigenvalue {
                    lambda,
                    multiplicity: sv.iter().filter(|&&s| s <= opts.multiplicity).count(),
                    relative_sigma_min: sigma,
                })
            })
            .collect();
        found.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        // Adjacent brackets can converge to the same root.
        found.dedup_by(|b, a| (b.lambda - a.lambda).abs() <= 1e-7 * (1.0 + a.lambda.abs()));
        Ok(found)
    }

    fn golden_section(&self, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let f = |x: f64| self.objective(re(x));
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..200 {
            if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
                break;
            }
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = f(x2);
            }
        }
        if f1 <= f2 {
            x1
        } else {
            x2
        }
    }

    /// Smallest relative `σ_min` over `λ + iε` for the given real parts.
    pub fn complex_probe(&self, real_parts: &[f64], epsilon: f64) -> f64 {
        real_parts
            .par_iter()
            .map(|&x| self.objective(Scalar::new(x, epsilon)))
            .reduce(|| f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{shorthand_to_xl, Shorthand};
    use std::f64::consts::PI;

    fn problem(g: &MetricGraph, s: Shorthand) -> SecularProblem {
        SecularProblem::new(g, &shorthand_to_xl(g, &s, ScalarField::Real).unwrap()).unwrap()
    }

    #[test]
    fn fundamental_at_zero() {
        let f = edge_fundamental(re(0.0), 1.0);
        assert_eq!((f.c[1], f.s[1]), (re(1.0), re(1.0)));
        assert_eq!((f.dc[1], f.ds[1]), (re(0.0), re(1.0)));
    }

    #[test]
    fn fundamental_at_one_over_pi() {
        let f = edge_fundamental(re(1.0), PI);
        assert!((f.c[1] - re(-1.0)).norm() < 1e-15);
        assert!(f.s[1].norm() < 1e-15);
        assert!((f.ds[1] - re(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn negative_lambda_matches_series() {
        // Full Taylor series of cosh and sinh, summed to convergence.
        let f = edge_fundamental(re(-1.0), 1.0);
        let (mut cosh, mut sinh, mut term) = (0.0, 0.0, 1.0);
        for k in 0..30 {
            if k % 2 == 0 {
                cosh += term;
            } else {
                sinh += term;
            }
            term /= (k + 1) as f64;
        }
        assert!((f.c[1].re - cosh).abs() < 1e-14);
        assert!((f.s[1].re - sinh).abs() < 1e-14);
        assert!((f.dc[1].re - sinh).abs() < 1e-14);
        assert!(f.c[1].im.abs() < 1e-15);
    }

    #[test]
    fn series_and_closed_form_agree_at_the_switch() {
        let lam = re(SERIES_THRESHOLD * 1.0001);
        let closed = edge_fundamental(lam, 1.0);
        let (c, dc, s, _) = series(lam, 1.0);
        assert!((closed.c[1] - c).norm() < 1e-15);
        assert!((closed.dc[1] - dc).norm() < 1e-15);
        assert!((closed.s[1] - s).norm() < 1e-15);
    }

    #[test]
    fn dirichlet_objective_vanishes_at_squares() {
        let g = MetricGraph::interval(0.0, PI).unwrap();
        let p = problem(&g, Shorthand::Dirichlet);
        for n in 1..=3 {
            assert!(p.objective(re((n * n) as f64)) < 1e-14);
        }
        assert!(p.objective(re(2.0)) > 1e-2);
    }

    #[test]
    fn dirichlet_scan() {
        let g = MetricGraph::interval(0.0, PI).unwrap();
        let found = problem(&g, Shorthand::Dirichlet).eigenvalue_scan(&ScanOptions::new(0.5, 30.0)).unwrap();
        let values: Vec<f64> = found.iter().map(|e| e.lambda).collect();
        assert_eq!(values.len(), 5, "{found:?}");
        for (j, v) in values.iter().enumerate() {
            assert!((v - ((j + 1) * (j + 1)) as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn circle_has_double_eigenvalues() {
        let g = MetricGraph::circle(2.0 * PI).unwrap();
        let found = problem(&g, Shorthand::Kirchhoff).eigenvalue_scan(&ScanOptions::new(-0.5, 10.0)).unwrap();
        let summary: Vec<(f64, usize)> = found.iter().map(|e| (e.lambda, e.multiplicity)).collect();
        assert_eq!(summary.len(), 4, "{summary:?}");
        assert!(summary[0].0.abs() < 1e-8 && summary[0].1 == 1);
        for (k, &(lam, mult)) in summary.iter().enumerate().skip(1) {
            assert!((lam - (k * k) as f64).abs() < 1e-8);
            assert_eq!(mult, 2);
        }
    }

    #[test]
    fn non_compact_graph_is_rejected() {
        let g = MetricGraph::half_line(0.0).unwrap();
        let data = shorthand_to_xl(&g, &Shorthand::Dirichlet, ScalarField::Real).unwrap();
        assert!(matches!(SecularProblem::new(&g, &data), Err(SecularError::NonCompact(_))));
    }
}
