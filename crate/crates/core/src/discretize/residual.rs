use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::field::{re, Scalar};
use crate::graph::MetricGraph;

use super::{build_trace_operators, DiscreteFunction, DiscretizeError, Grids, Result, TraceOperators};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `−f″` against the standard skew-symmetric boundary form.
    Laplace,
    /// `f′` against the standard unitary boundary form.
    Derivative,
}

/// Pointwise FD approximation of `f″` (second order everywhere; needs 4 points per edge).
pub fn second_derivative(grids: &Grids, f: &DVector<Scalar>) -> Result<DVector<Scalar>> {
    let mut out = DVector::zeros(f.len());
    for grid in grids.edges() {
        if grid.n < 4 {
            return Err(DiscretizeError::GridTooCoarse {
                edge: format!("at offset {}", grid.offset),
                points: grid.n,
                required: 4,
            });
        }
        let h2 = grid.h * grid.h;
        let o = grid.offset;
        let l = grid.last();
        for i in o + 1..l {
            out[i] = (f[i - 1] - f[i] * 2.0 + f[i + 1]) / h2;
        }
        out[o] = (f[o] * 2.0 - f[o + 1] * 5.0 + f[o + 2] * 4.0 - f[o + 3]) / h2;
        out[l] = (f[l] * 2.0 - f[l - 1] * 5.0 + f[l - 2] * 4.0 - f[l - 3]) / h2;
    }
    Ok(out)
}

/// Pointwise FD approximation of `f′` (central inside, one-sided at the ends).
pub fn first_derivative(grids: &Grids, f: &DVector<Scalar>) -> DVector<Scalar> {
    let mut out = DVector::zeros(f.len());
    for grid in grids.edges() {
        let h = grid.h;
        let o = grid.offset;
        let l = grid.last();
        for i in o + 1..l {
            out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        out[o] = (f[o] * -3.0 + f[o + 1] * 4.0 - f[o + 2]) / (2.0 * h);
        out[l] = (f[l] * 3.0 - f[l - 1] * 4.0 + f[l - 2]) / (2.0 * h);
    }
    out
}

/// `Σ w_i u_i conj(v_i)` with trapezoidal weights.
fn l2(weights: &[f64], u: &DVector<Scalar>, v: &DVector<Scalar>) -> Scalar {
    u.iter().zip(v.iter()).zip(weights).map(|((a, b), &w)| a * b.conj() * w).sum()
}

/// `Σ u_i conj(v_i)`.
fn ell2(u: &DVector<Scalar>, v: &DVector<Scalar>) -> Scalar {
    u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Defect of the integration-by-parts identity behind the boundary system,
/// evaluated with FD derivatives and trapezoidal quadrature.
///
/// Laplace: `|⟨f, −g″⟩ − ⟨−f″, g⟩ − (⟨tr f, str g′⟩ − ⟨str f′, tr g⟩)|`.
/// Derivative: `|⟨f, g′⟩ + ⟨f′, g⟩ − (⟨tr_r f, tr_r g⟩ − ⟨tr_l f, tr_l g⟩)|`.
pub fn boundary_system_residual(
    g: &MetricGraph,
    grids: &Grids,
    f: &DiscreteFunction,
    g2: &DiscreteFunction,
    operator: OperatorKind,
) -> Result<f64> {
    grids.check_matches(g)?;
    for v in [f, g2] {
        if v.len() != grids.total_points() {
            return Err(DiscretizeError::Shape(format!(
                "function has {} samples, grids have {}",
                v.len(),
                grids.total_points()
            )));
        }
    }
    let ops = build_trace_operators(g, grids)?;
    let w = grids.weights();
    let (f, gv) = (&f.values, &g2.values);
    let apply = TraceOperators::apply;
    let defect = match operator {
        OperatorKind::Laplace => {
            let hf = -second_derivative(grids, f)?;
            let hg = -second_derivative(grids, gv)?;
            let interior = l2(&w, f, &hg) - l2(&w, &hf, gv);
            let boundary = ell2(&apply(&ops.t, f), &apply(&ops.sd, gv)) - ell2(&apply(&ops.sd, f), &apply(&ops.t, gv));
            interior - boundary
        }
        OperatorKind::Derivative => {
            let df = first_derivative(grids, f);
            let dg = first_derivative(grids, gv);
            let interior = l2(&w, f, &dg) + l2(&w, &df, gv);
            let boundary = ell2(&apply(&ops.t_right, f), &apply(&ops.t_right, gv))
                - ell2(&apply(&ops.t_left, f), &apply(&ops.t_left, gv));
            interior - boundary
        }
    };
    Ok(defect.norm())
}

/// Slope of `log(residual)` against `log(h)` by least squares.
pub fn observed_order(hs: &[f64], residuals: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = hs.iter().zip(residuals).map(|(h, r)| (h.ln(), r.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// One row of a refinement study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub points: usize,
    pub h_max: f64,
    pub residual: f64,
    /// `log(r_prev / r) / log(h_prev / h)` against the previous row.
    pub order: Option<f64>,
}

/// Residuals of `f`, `g` sampled by `sample` on grids with the given point
/// counts per edge.
pub fn refinement_study(
    g: &MetricGraph,
    ladder: &[usize],
    operator: OperatorKind,
    mut sample: impl FnMut(&Grids) -> (DiscreteFunction, DiscreteFunction),
) -> Result<Vec<RefinementRow>> {
    let mut rows: Vec<RefinementRow> = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let grids = Grids::uniform(g, n)?;
        let (f, g2) = sample(&grids);
        let residual = boundary_system_residual(g, &grids, &f, &g2, operator)?;
        let h = grids.h_max();
        let order = rows.last().map(|p| (p.residual / residual).ln() / (p.h_max / h).ln());
        rows.push(RefinementRow {
            points: n,
            h_max: h,
            residual,
            order,
        });
    }
    Ok(rows)
}

/// `sin(πx)` and `x²` on every edge, the standard smooth test pair.
pub fn reference_pair(grids: &Grids) -> (DiscreteFunction, DiscreteFunction) {
    (
        DiscreteFunction::sample(grids, |_, x| re((std::f64::consts::PI * x).sin())),
        DiscreteFunction::sample(grids, |_, x| re(x * x)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_functions_have_zero_residual() {
        let g = MetricGraph::star(&[1.0, 2.0, 3.0]).unwrap();
        let grids = Grids::uniform(&g, 20).unwrap();
        let z = DiscreteFunction::zeros(&grids);
        for op in [OperatorKind::Laplace, OperatorKind::Derivative] {
            assert_eq!(boundary_system_residual(&g, &grids, &z, &z, op).unwrap(), 0.0);
        }
    }

    #[test]
    fn sine_and_square_on_unit_interval() {
        let g = MetricGraph::interval(0.0, 1.0).unwrap();
        let res = |n| {
            let grids = Grids::uniform(&g, n).unwrap();
            let (f, g2) = reference_pair(&grids);
            boundary_system_residual(&g, &grids, &f, &g2, OperatorKind::Laplace).unwrap()
        };
        let (r200, r400) = (res(200), res(400));
        assert!(r200 <= 1e-3, "{r200}");
        assert!(r400 <= 2.5e-4, "{r400}");
        let ratio = r200 / r400;
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn derivative_identity_converges_at_second_order() {
        let g = MetricGraph::interval(0.0, 1.0).unwrap();
        let rows = refinement_study(&g, &[41, 81, 161, 321], OperatorKind::Derivative, |grids| {
            (
                DiscreteFunction::sample(grids, |_, x| re(x.exp())),
                DiscreteFunction::sample(grids, |_, x| re((2.0 * x).cos())),
            )
        })
        .unwrap();
        let hs: Vec<f64> = rows.iter().map(|r| r.h_max).collect();
        let rs: Vec<f64> = rows.iter().map(|r| r.residual).collect();
        assert!(observed_order(&hs, &rs) > 1.9, "{rows:?}");
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let g = MetricGraph::interval(0.0, 1.0).unwrap();
        let grids = Grids::uniform(&g, 10).unwrap();
        let other = Grids::uniform(&g, 12).unwrap();
        let f = DiscreteFunction::zeros(&other);
        assert!(matches!(
            boundary_system_residual(&g, &grids, &f, &f, OperatorKind::Laplace),
            Err(DiscretizeError::Shape(_))
        ));
    }
}
