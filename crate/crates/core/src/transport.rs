//! The unitary transport group `u_t = u_x` on a compact metric graph.
//!
//! Each edge is sampled on the left-closed grid `a_e, a_e + h, …, b_e − h`.
//! One step shifts every profile by `h` toward `a_e`. The samples leaving
//! through the left ends form a vector `v` over `E_l`, and `L†·v` is written
//! into the last slot of the edges in `E_r`, which keeps `L·tr_r u = tr_l u`.
//! With edge lengths that are integer multiples of `h` the scheme needs no
//! interpolation and is unitary for the `h`-weighted `ℓ2` norm.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::field::{re, CMatrix, Scalar};
use crate::graph::{check_skew_coupling, GraphError, MetricGraph};

/// Tolerance on `‖L†L − I‖` at construction.
pub const UNITARY_TOL: f64 = 1e-10;
/// Relative tolerance for edge lengths being multiples of `h`.
pub const COMMENSURABILITY_TOL: f64 = 1e-12;
/// Tolerance for `(t_target − t)/h` being an integer.
pub const STEP_COUNT_TOL: f64 = 1e-9;
/// Largest state for which [`TransportState::step_matrix`] is built.
pub const MAX_STEP_MATRIX: usize = 2000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransportError {
    #[error("transport needs a compact graph; edges {0:?} are unbounded")]
    NonCompact(Vec<String>),
    #[error("step h = {0} must be positive and finite")]
    InvalidStep(f64),
    #[error("edge {edge} has length {length}, which is not an integer multiple of h = {h}")]
    Incommensurable { edge: String, length: f64, h: f64 },
    #[error("(t_target − t)/h = {ratio} is not an integer")]
    NonIntegralSteps { ratio: f64 },
    #[error("state has {found} samples, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("step matrix of size {0} exceeds the limit {MAX_STEP_MATRIX}")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, TransportError>;

#[derive(Debug, Clone, PartialEq)]
pub struct TransportState {
    edge_ids: Vec<String>,
    starts: Vec<f64>,
    offsets: Vec<usize>,
    counts: Vec<usize>,
    /// `E_l` and `E_r` as edge indices, in the order of the rows and columns of `L`.
    left: Vec<usize>,
    right: Vec<usize>,
    l: CMatrix,
    l_adjoint: CMatrix,
    h: f64,
    t: f64,
    values: DVector<Scalar>,
}

impl TransportState {
    /// Samples `initial(edge, x)` on every edge grid.
    pub fn new<F>(g: &MetricGraph, h: f64, l: &CMatrix, initial: F) -> Result<Self>
    where
        F: Fn(usize, f64) -> Scalar,
    {
        check_skew_coupling(g, l, UNITARY_TOL)?;
        Self::build(g, h, l, initial)
    }

    /// Like [`TransportState::new`] but accepts any `L` of the right shape.
    /// Only meant for negative controls with non-unitary couplings.
    pub fn new_unchecked<F>(g: &MetricGraph, h: f64, l: &CMatrix, initial: F) -> Result<Self>
    where
        F: Fn(usize, f64) -> Scalar,
    {
        let report = g.report();
        if report.left_count != report.right_count {
            return Err(GraphError::CardinalityMismatch {
                left: report.left_count,
                right: report.right_count,
            }
            .into());
        }
        if l.nrows() != report.left_count || l.ncols() != report.right_count {
            return Err(GraphError::Dimension {
                what: "coupling shape |E_l| × |E_r|",
                expected: report.left_count,
                found: l.nrows(),
            }
            .into());
        }
        Self::build(g, h, l, initial)
    }

    fn build<F>(g: &MetricGraph, h: f64, l: &CMatrix, initial: F) -> Result<Self>
    where
        F: Fn(usize, f64) -> Scalar,
    {
        let unbounded: Vec<String> = g.edges().iter().filter(|e| !e.is_compact()).map(|e| e.id.clone()).collect();
        if !unbounded.is_empty() {
            return Err(TransportError::NonCompact(unbounded));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(TransportError::InvalidStep(h));
        }
        let mut counts = Vec::new();
        for e in g.edges() {
            let ratio = e.length() / h;
            let n = ratio.round();
            if n < 1.0 || (ratio - n).abs() > COMMENSURABILITY_TOL * ratio {
                return Err(TransportError::Incommensurable {
                    edge: e.id.clone(),
                    length: e.length(),
                    h,
                });
            }
            counts.push(n as usize);
        }
        let mut offsets = Vec::with_capacity(counts.len());
        let mut total = 0;
        for &n in &counts {
            offsets.push(total);
            total += n;
        }
        let starts: Vec<f64> = g.edges().iter().map(|e| e.a).collect();
        let mut values = DVector::zeros(total);
        for (e, (&off, &n)) in offsets.iter().zip(&counts).enumerate() {
            for j in 0..n {
                values[off + j] = initial(e, starts[e] + j as f64 * h);
            }
        }
        Ok(Self {
            edge_ids: g.edges().iter().map(|e| e.id.clone()).collect(),
            starts,
            offsets,
            counts,
            left: g.left_edges(),
            right: g.right_edges(),
            l: l.clone(),
            l_adjoint: l.adjoint(),
            h,
            t: 0.0,
            values,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// All samples, edge after edge.
    pub fn values(&self) -> &DVector<Scalar> {
        &self.values
    }

    /// Replaces the samples, keeping the grid and the time.
    pub fn set_values(&mut self, values: DVector<Scalar>) -> Result<()> {
        if values.len() != self.values.len() {
            return Err(TransportError::Dimension {
                expected: self.values.len(),
                found: values.len(),
            });
        }
        self.values = values;
        Ok(())
    }

    pub fn edge_ids(&self) -> &[String] {
        &self.edge_ids
    }

    /// Samples on edge `e`.
    pub fn edge_values(&self, e: usize) -> &[Scalar] {
        &self.values.as_slice()[self.offsets[e]..self.offsets[e] + self.counts[e]]
    }

    /// Grid point `j` on edge `e`.
    pub fn point(&self, e: usize, j: usize) -> f64 {
        self.starts[e] + j as f64 * self.h
    }

    /// `(h·Σ|u_j|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        (self.h * self.values.norm_squared()).sqrt()
    }

    /// Advances by `h`.
    pub fn step(&mut self) {
        let exiting = DVector::from_iterator(self.left.len(), self.left.iter().map(|&e| self.values[self.offsets[e]]));
        let injected = &self.l_adjoint * exiting;
        for (&off, &n) in self.offsets.iter().zip(&self.counts) {
            self.values.as_mut_slice()[off..off + n].rotate_left(1);
        }
        for (k, &e) in self.right.iter().enumerate() {
            self.values[self.offsets[e] + self.counts[e] - 1] = injected[k];
        }
        self.t += self.h;
    }

    /// Goes back by `h`; the exact inverse of [`TransportState::step`] when `L` is unitary.
    pub fn step_back(&mut self) {
        let entering =
            DVector::from_iterator(self.right.len(), self.right.iter().map(|&e| self.values[self.offsets[e] + self.counts[e] - 1]));
        let restored = &self.l * entering;
        for (&off, &n) in self.offsets.iter().zip(&self.counts) {
            self.values.as_mut_slice()[off..off + n].rotate_right(1);
        }
        for (k, &e) in self.left.iter().enumerate() {
            self.values[self.offsets[e]] = restored[k];
        }
        self.t -= self.h;
    }

    /// Number of steps from the current time to `t_target`, negative for going back.
    pub fn steps_to(&self, t_target: f64) -> Result<i64> {
        let ratio = (t_target - self.t) / self.h;
        let n = ratio.round();
        if !ratio.is_finite() || (ratio - n).abs() > STEP_COUNT_TOL {
            return Err(TransportError::NonIntegralSteps { ratio });
        }
        Ok(n as i64)
    }

    /// Steps forward or backward until the time is `t_target`.
    pub fn evolve(&mut self, t_target: f64) -> Result<()> {
        let n = self.steps_to(t_target)?;
        let t0 = self.t;
        for _ in 0..n.unsigned_abs() {
            if n > 0 {
                self.step();
            } else {
                self.step_back();
            }
        }
        // Snap to the exact grid time so long runs do not drift.
        self.t = t0 + n as f64 * self.h;
        Ok(())
    }

    /// Evolves to `t_target`, recording the state after every step.
    pub fn trajectory(&self, t_target: f64) -> Result<Vec<TransportState>> {
        let n = self.steps_to(t_target)?;
        let mut state = self.clone();
        let mut out = Vec::with_capacity(n.unsigned_abs() as usize + 1);
        out.push(state.clone());
        for k in 1..=n.unsigned_abs() {
            if n > 0 {
                state.step();
            } else {
                state.step_back();
            }
            state.t = self.t + k as f64 * self.h * n.signum() as f64;
            out.push(state.clone());
        }
        Ok(out)
    }

    /// The matrix of one forward step acting on the concatenated samples.
    pub fn step_matrix(&self) -> Result<CMatrix> {
        let n = self.values.len();
        if n > MAX_STEP_MATRIX {
            return Err(TransportError::TooLarge(n));
        }
        let mut probe = self.clone();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut unit = DVector::zeros(n);
            unit[j] = re(1.0);
            probe.values = unit;
            probe.step();
            m.set_column(j, &probe.values);
        }
        Ok(m)
    }
}

/// Norm of each state in a run and the largest relative change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// `(t, ‖u(t)‖)`.
    pub series: Vec<(f64, f64)>,
    /// `max_t |‖u(t)‖ − ‖u(0)‖| / ‖u(0)‖`, absolute when `‖u(0)‖ = 0`.
    pub max_relative_deviation: f64,
}

impl NormReport {
    pub fn from_series(series: Vec<(f64, f64)>) -> Self {
        let initial = series.first().map_or(0.0, |p| p.1);
        let scale = if initial > 0.0 { initial } else { 1.0 };
        let max_relative_deviation = series.iter().map(|p| (p.1 - initial).abs() / scale).fold(0.0, f64::max);
        Self {
            series,
            max_relative_deviation,
        }
    }
}

pub fn norm_report(trajectory: &[TransportState]) -> NormReport {
    let series: Vec<(f64, f64)> = trajectory
        .iter()
        .filter(|s| !s.values.is_empty())
        .map(|s| (s.t, s.norm()))
        .collect();
    NormReport::from_series(series)
}

/// Runs `steps` forward steps without storing states and reports the norms.
pub fn run_norms(state: &mut TransportState, steps: usize) -> NormReport {
    let mut series = Vec::with_capacity(steps + 1);
    let t0 = state.t;
    if !state.values.is_empty() {
        series.push((state.t, state.norm()));
    }
    for k in 1..=steps {
        state.step();
        state.t = t0 + k as f64 * state.h;
        if !state.values.is_empty() {
            series.push((state.t, state.norm()));
        }
    }
    NormReport::from_series(series)
}

/// The real rotation by `theta`.
pub fn rotation(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_row_slice(2, 2, &[re(c), re(-s), re(s), re(c)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{identity, unitary_defect};
    use crate::graph::Edge;
    use std::f64::consts::PI;

    fn max_abs(v: &DVector<Scalar>) -> f64 {
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn sine(_: usize, x: f64) -> Scalar {
        re((2.0 * PI * x).sin())
    }

    #[test]
    fn circle_full_period_is_identity() {
        let g = MetricGraph::circle(1.0).unwrap();
        let mut s = TransportState::new(&g, 0.01, &identity(1), sine).unwrap();
        let initial = s.values().clone();
        s.evolve(1.0).unwrap();
        assert!(max_abs(&(s.values() - &initial)) < 1e-12);
        assert_eq!(s.time(), 1.0);
    }

    #[test]
    fn antiperiodic_circle_flips_sign() {
        let g = MetricGraph::circle(1.0).unwrap();
        let mut s = TransportState::new(&g, 0.02, &(-identity(1)), sine).unwrap();
        let initial = s.values().clone();
        s.evolve(1.0).unwrap();
        assert!(max_abs(&(s.values() + &initial)) < 1e-12);
    }

    #[test]
    fn shift_moves_profile_toward_start() {
        let g = MetricGraph::circle(1.0).unwrap();
        let bump = |_: usize, x: f64| re((-(x - 0.25f64).powi(2) * 200.0).exp());
        let mut s = TransportState::new(&g, 0.01, &identity(1), bump).unwrap();
        s.evolve(0.5).unwrap();
        // u(0.5, x) = u0(x + 0.5 mod 1).
        for (j, v) in s.edge_values(0).iter().enumerate() {
            let x = s.point(0, j);
            assert!((v - bump(0, (x + 0.5) % 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn step_matrix_is_unitary_permutation_with_coupling_block() {
        let g = MetricGraph::cycle(&[1.0, 1.0]).unwrap();
        let s = TransportState::new(&g, 0.25, &rotation(0.7), sine).unwrap();
        let m = s.step_matrix().unwrap();
        assert_eq!(m.nrows(), 8);
        assert!(unitary_defect(&m) < 1e-14);
    }

    #[test]
    fn backward_step_inverts_forward_step() {
        let g = MetricGraph::cycle(&[1.0, 0.5]).unwrap();
        let mut s = TransportState::new(&g, 0.1, &rotation(1.3), |e, x| re(x + e as f64)).unwrap();
        let initial = s.values().clone();
        s.evolve(3.0).unwrap();
        s.evolve(0.0).unwrap();
        assert!(max_abs(&(s.values() - &initial)) < 1e-12);
    }

    #[test]
    fn incommensurable_lengths_are_rejected() {
        let g = MetricGraph::cycle(&[1.0, 0.3]).unwrap();
        let err = TransportState::new(&g, 0.25, &identity(2), sine).unwrap_err();
        assert!(matches!(err, TransportError::Incommensurable { .. }));
    }

    #[test]
    fn non_integral_time_is_rejected() {
        let g = MetricGraph::circle(1.0).unwrap();
        let mut s = TransportState::new(&g, 0.1, &identity(1), sine).unwrap();
        assert!(matches!(s.evolve(0.05), Err(TransportError::NonIntegralSteps { .. })));
    }

    #[test]
    fn cardinality_mismatch_is_rejected() {
        let vertices = vec!["v0".to_string(), "v1".to_string()];
        let edges = vec![
            Edge::finite("e1", 0.0, 1.0, "v0", "v1"),
            Edge::new("e2", 0.0, f64::INFINITY, Some("v1"), None),
        ];
        let g = MetricGraph::new(vertices, edges).unwrap();
        let err = TransportState::new(&g, 0.1, &identity(1), sine).unwrap_err();
        assert!(err.to_string().contains("E_r and E_l cardinalities differ"));
    }

    #[test]
    fn non_unitary_coupling_decays() {
        let g = MetricGraph::circle(1.0).unwrap();
        let half = identity(1) * re(0.5);
        assert!(TransportState::new(&g, 0.1, &half, sine).is_err());
        let mut s = TransportState::new_unchecked(&g, 0.1, &half, sine).unwrap();
        let n0 = s.norm();
        s.evolve(1.0).unwrap();
        assert!((s.norm() - 0.5 * n0).abs() < 1e-12);
    }

    #[test]
    fn norm_report_of_empty_graph_is_empty() {
        let g = MetricGraph::new(vec![], vec![]).unwrap();
        let s = TransportState::new(&g, 0.1, &identity(0), sine).unwrap();
        let report = norm_report(&s.trajectory(1.0).unwrap());
        assert!(report.series.is_empty());
        assert_eq!(report.max_relative_deviation, 0.0);
    }
}
