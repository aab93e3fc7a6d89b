use nalgebra::DVector;

use crate::field::{re, CMatrix, Scalar};
use crate::graph::{BoundaryIndex, MetricGraph};

use super::{Grids, Result};

/// A sparse row vector over the concatenated grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseRow {
    pub entries: Vec<(usize, Scalar)>,
}

impl SparseRow {
    pub fn new(entries: Vec<(usize, Scalar)>) -> Self {
        Self { entries }
    }

    pub fn unit(col: usize) -> Self {
        Self::new(vec![(col, re(1.0))])
    }

    pub fn dot(&self, v: &DVector<Scalar>) -> Scalar {
        self.entries.iter().map(|&(j, c)| c * v[j]).sum()
    }

    pub fn scaled(&self, s: Scalar) -> Self {
        Self::new(self.entries.iter().map(|&(j, c)| (j, c * s)).collect())
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ_k coeffs[k]·rows[k]`, merging equal columns.
    pub fn combine(rows: &[SparseRow], coeffs: impl IntoIterator<Item = Scalar>) -> Self {
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        for (row, c) in rows.iter().zip(coeffs) {
            if c == Scalar::new(0.0, 0.0) {
                continue;
            }
            for &(j, v) in &row.entries {
                match acc.iter_mut().find(|(k, _)| *k == j) {
                    Some((_, s)) => *s += c * v,
                    None => acc.push((j, c * v)),
                }
            }
        }
        acc.sort_by_key(|&(j, _)| j);
        Self::new(acc)
    }
}

/// Dense `rows × n` matrix of sparse rows.
pub fn dense(rows: &[SparseRow], n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows.len(), n);
    for (i, row) in rows.iter().enumerate() {
        for &(j, c) in &row.entries {
            m[(i, j)] += c;
        }
    }
    m
}

/// Endpoint evaluations on the concatenated grid.
///
/// `t` and `sd` are indexed by `E′`; `t_left` by `E_l` and `t_right` by `E_r`,
/// both in edge declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceOperators {
    pub t: Vec<SparseRow>,
    pub sd: Vec<SparseRow>,
    pub t_left: Vec<SparseRow>,
    pub t_right: Vec<SparseRow>,
    pub n: usize,
}

/// One-sided second-order derivative into the edge at its start point.
fn start_derivative(first: usize, h: f64) -> SparseRow {
    SparseRow::new(vec![
        (first, re(-1.5 / h)),
        (first + 1, re(2.0 / h)),
        (first + 2, re(-0.5 / h)),
    ])
}

/// `(T f)(e,0) = f_e(a_e)`, `(T f)(e,1) = f_e(b_e)`, `(Sd f)(e,0) = f_e′(a_e)`,
/// `(Sd f)(e,1) = −f_e′(b_e)` with second-order one-sided stencils.
pub fn build_trace_operators(g: &MetricGraph, grids: &Grids) -> Result<TraceOperators> {
    grids.check_matches(g)?;
    let index = BoundaryIndex::new(g);
    let mut t = Vec::with_capacity(index.len());
    let mut sd = Vec::with_capacity(index.len());
    for &(e, flag) in index.entries() {
        let grid = &grids.edges()[e];
        if flag == 0 {
            t.push(SparseRow::unit(grid.first()));
            sd.push(start_derivative(grid.first(), grid.h));
        } else {
            t.push(SparseRow::unit(grid.last()));
            // −f′(b) ≈ (−3f_{n−1} + 4f_{n−2} − f_{n−3})/(2h): the mirror of the start stencil.
            let l = grid.last();
            sd.push(SparseRow::new(vec![
                (l - 2, re(-0.5 / grid.h)),
                (l - 1, re(2.0 / grid.h)),
                (l, re(-1.5 / grid.h)),
            ]));
        }
    }
    let t_left = g.left_edges().into_iter().map(|e| SparseRow::unit(grids.edges()[e].first())).collect();
    let t_right = g.right_edges().into_iter().map(|e| SparseRow::unit(grids.edges()[e].last())).collect();
    Ok(TraceOperators {
        t,
        sd,
        t_left,
        t_right,
        n: grids.total_points(),
    })
}

impl TraceOperators {
    pub fn t_dense(&self) -> CMatrix {
        dense(&self.t, self.n)
    }

    pub fn sd_dense(&self) -> CMatrix {
        dense(&self.sd, self.n)
    }

    pub fn apply(rows: &[SparseRow], f: &DVector<Scalar>) -> DVector<Scalar> {
        DVector::from_iterator(rows.len(), rows.iter().map(|r| r.dot(f)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{DiscreteFunction, GridSpec, TruncationOptions};

    #[test]
    fn linear_function_is_exact() {
        let g = MetricGraph::interval(0.0, 1.0).unwrap();
        let grids = Grids::uniform(&g, 11).unwrap();
        let ops = build_trace_operators(&g, &grids).unwrap();
        let f = DiscreteFunction::sample(&grids, |_, x| re(x));
        let tf = TraceOperators::apply(&ops.t, &f.values);
        let sf = TraceOperators::apply(&ops.sd, &f.values);
        assert_eq!((tf[0].re, tf[1].re), (0.0, 1.0));
        assert!((sf[0].re - 1.0).abs() < 1e-13 && (sf[1].re + 1.0).abs() < 1e-13);
        for row in ops.t.iter().chain(&ops.sd) {
            assert!(row.entries.len() <= 3);
        }
    }

    #[test]
    fn quadratic_signed_derivative() {
        // The 3-point stencils are exact on quadratics, so the O(h²) bound is met with room to spare.
        let g = MetricGraph::interval(0.0, 1.0).unwrap();
        for n in [11, 21] {
            let grids = Grids::uniform(&g, n).unwrap();
            let ops = build_trace_operators(&g, &grids).unwrap();
            let f = DiscreteFunction::sample(&grids, |_, x| re(x * x));
            let sf = TraceOperators::apply(&ops.sd, &f.values);
            let h = grids.h_max();
            assert!(sf[0].norm() <= h * h && (sf[1].re + 2.0).abs() <= h * h);
        }
    }

    #[test]
    fn truncated_half_line_has_one_trace_row() {
        let g = MetricGraph::half_line(0.0).unwrap();
        let opts = TruncationOptions {
            length: 10.0,
            dirichlet: true,
        };
        let grids = Grids::new(&g, GridSpec::Points(21), opts).unwrap();
        let ops = build_trace_operators(&g, &grids).unwrap();
        assert_eq!(ops.t.len(), 1);
        assert_eq!(ops.t_left.len(), 1);
        assert!(ops.t_right.is_empty());
    }
}
