use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::field::Scalar;
use crate::graph::MetricGraph;

use super::{DiscretizeError, Result};

/// Smallest number of grid points per edge (width of the one-sided stencils).
pub const MIN_POINTS: usize = 3;

/// Largest total number of grid points accepted by the dense eigensolvers.
pub const MAX_TOTAL_POINTS: usize = 20_000;

/// How many points each edge receives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// The same number of points on every edge.
    Points(usize),
    /// Uniform steps no larger than the given value: `n_e = ⌈len/h⌉ + 1`.
    MaxStep(f64),
}

/// Handling of unbounded edges: they are cut to a window of the given length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationOptions {
    pub length: f64,
    /// Impose `f = 0` at artificial endpoints (otherwise they stay free).
    pub dirichlet: bool,
}

impl Default for TruncationOptions {
    fn default() -> Self {
        Self {
            length: 10.0,
            dirichlet: true,
        }
    }
}

/// Record of an unbounded edge that was cut for computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub edge: String,
    pub window: (f64, f64),
    pub artificial_start: bool,
    pub artificial_end: bool,
    pub dirichlet: bool,
}

/// Uniform grid on one edge (or on its truncation window).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeGrid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
    pub h: f64,
    /// Index of the first point in the concatenated vector.
    pub offset: usize,
}

impl EdgeGrid {
    pub fn x(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            self.end
        } else {
            self.start + j as f64 * self.h
        }
    }

    pub fn first(&self) -> usize {
        self.offset
    }

    pub fn last(&self) -> usize {
        self.offset + self.n - 1
    }
}

/// Grids on all edges of a graph, concatenated in edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    edges: Vec<EdgeGrid>,
    truncations: Vec<Truncation>,
    total: usize,
}

impl Grids {
    pub fn new(g: &MetricGraph, spec: GridSpec, truncation: TruncationOptions) -> Result<Self> {
        let mut edges = Vec::with_capacity(g.edges().len());
        let mut truncations = Vec::new();
        let mut offset = 0;
        for e in g.edges() {
            let (start, end) = match (e.has_left(), e.has_right()) {
                (true, true) => (e.a, e.b),
                (true, false) => (e.a, e.a + truncation.length),
                (false, true) => (e.b - truncation.length, e.b),
                (false, false) => (-0.5 * truncation.length, 0.5 * truncation.length),
            };
            if !e.is_compact() {
                if !(truncation.length > 0.0 && truncation.length.is_finite()) {
                    return Err(DiscretizeError::InvalidOption(format!(
                        "truncation length must be positive and finite, got {}",
                        truncation.length
                    )));
                }
                truncations.push(Truncation {
                    edge: e.id.clone(),
                    window: (start, end),
                    artificial_start: !e.has_left(),
                    artificial_end: !e.has_right(),
                    dirichlet: truncation.dirichlet,
                });
            }
            let n = match spec {
                GridSpec::Points(n) => n,
                GridSpec::MaxStep(h) => {
                    if !(h > 0.0 && h.is_finite()) {
                        return Err(DiscretizeError::InvalidOption(format!("step must be positive, got {h}")));
                    }
                    ((end - start) / h * (1.0 - 1e-12)).ceil() as usize + 1
                }
            };
            if n < MIN_POINTS {
                return Err(DiscretizeError::GridTooCoarse {
                    edge: e.id.clone(),
                    points: n,
                    required: MIN_POINTS,
                });
            }
            edges.push(EdgeGrid {
                start,
                end,
                n,
                h: (end - start) / (n - 1) as f64,
                offset,
            });
            offset += n;
        }
        Ok(Self {
            edges,
            truncations,
            total: offset,
        })
    }

    /// Same number of points on every edge; unbounded edges use the default truncation.
    pub fn uniform(g: &MetricGraph, n: usize) -> Result<Self> {
        Self::new(g, GridSpec::Points(n), TruncationOptions::default())
    }

    pub fn edges(&self) -> &[EdgeGrid] {
        &self.edges
    }

    pub fn truncations(&self) -> &[Truncation] {
        &self.truncations
    }

    pub fn total_points(&self) -> usize {
        self.total
    }

    pub fn h_max(&self) -> f64 {
        self.edges.iter().map(|e| e.h).fold(0.0, f64::max)
    }

    /// Trapezoidal quadrature weights.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.total];
        for e in &self.edges {
            for j in 0..e.n {
                w[e.offset + j] = if j == 0 || j + 1 == e.n { 0.5 * e.h } else { e.h };
            }
        }
        w
    }

    /// Global indices of the artificial endpoints that carry a Dirichlet condition.
    pub fn artificial_dirichlet_points(&self, g: &MetricGraph) -> Vec<usize> {
        let mut out = Vec::new();
        for (grid, e) in self.edges.iter().zip(g.edges()) {
            if !e.has_left() && self.truncations.iter().any(|t| t.edge == e.id && t.dirichlet) {
                out.push(grid.first());
            }
            if !e.has_right() && self.truncations.iter().any(|t| t.edge == e.id && t.dirichlet) {
                out.push(grid.last());
            }
        }
        out
    }

    pub(crate) fn check_matches(&self, g: &MetricGraph) -> Result<()> {
        if self.edges.len() != g.edges().len() {
            return Err(DiscretizeError::Shape(format!(
                "grids cover {} edges, graph has {}",
                self.edges.len(),
                g.edges().len()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_size(&self) -> Result<()> {
        if self.total > MAX_TOTAL_POINTS {
            return Err(DiscretizeError::TooLarge {
                points: self.total,
                limit: MAX_TOTAL_POINTS,
            });
        }
        Ok(())
    }
}

/// Samples of a function on every edge grid, concatenated in edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFunction {
    pub values: DVector<Scalar>,
}

impl DiscreteFunction {
    /// Evaluates `f(edge index, x)` at every grid point.
    pub fn sample(grids: &Grids, mut f: impl FnMut(usize, f64) -> Scalar) -> Self {
        let mut values = DVector::zeros(grids.total_points());
        for (i, e) in grids.edges().iter().enumerate() {
            for j in 0..e.n {
                values[e.offset + j] = f(i, e.x(j));
            }
        }
        Self { values }
    }

    pub fn zeros(grids: &Grids) -> Self {
        Self {
            values: DVector::zeros(grids.total_points()),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_endpoints_match_edges() {
        let g = MetricGraph::star(&[1.0, 2.0, PI]).unwrap();
        let grids = Grids::new(&g, GridSpec::MaxStep(0.1), TruncationOptions::default()).unwrap();
        for (grid, e) in grids.edges().iter().zip(g.edges()) {
            assert_eq!(grid.x(0), e.a);
            assert_eq!(grid.x(grid.n - 1), e.b);
            assert!(grid.h <= 0.1 + 1e-15);
        }
        assert_eq!(grids.edges()[0].n, 11);
        let total: f64 = grids.weights().iter().sum();
        assert!((total - (3.0 + PI)).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let g = MetricGraph::interval(0.0, 1.0).unwrap();
        assert!(matches!(Grids::uniform(&g, 2), Err(DiscretizeError::GridTooCoarse { .. })));
    }

    #[test]
    fn half_line_is_truncated_and_recorded() {
        let g = MetricGraph::half_line(1.0).unwrap();
        let opts = TruncationOptions {
            length: 10.0,
            dirichlet: true,
        };
        let grids = Grids::new(&g, GridSpec::Points(11), opts).unwrap();
        assert_eq!(grids.truncations().len(), 1);
        assert_eq!(grids.truncations()[0].window, (1.0, 11.0));
        assert!(grids.truncations()[0].artificial_end);
        assert_eq!(grids.artificial_dirichlet_points(&g), vec![10]);
    }
}
