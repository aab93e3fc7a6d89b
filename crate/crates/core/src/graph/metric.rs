use serde::{Deserialize, Serialize};

use super::{GraphError, Result};

/// Edge lengths below this are rejected unless a caller configures another bound.
pub const DEFAULT_MIN_EDGE_LENGTH: f64 = 1e-9;

/// The interval `(a, b)` of an edge. `a` may be `−∞` and `b` may be `+∞`.
/// `gamma0` is the vertex at `a` (present iff `a` is finite) and `gamma1` the
/// vertex at `b` (present iff `b` is finite).
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub a: f64,
    pub b: f64,
    pub gamma0: Option<String>,
    pub gamma1: Option<String>,
}

impl Edge {
    pub fn new(id: impl Into<String>, a: f64, b: f64, gamma0: Option<&str>, gamma1: Option<&str>) -> Self {
        Self {
            id: id.into(),
            a,
            b,
            gamma0: gamma0.map(str::to_owned),
            gamma1: gamma1.map(str::to_owned),
        }
    }

    /// Edge with both ends attached.
    pub fn finite(id: impl Into<String>, a: f64, b: f64, from: &str, to: &str) -> Self {
        Self::new(id, a, b, Some(from), Some(to))
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// `e ∈ E_l`.
    pub fn has_left(&self) -> bool {
        self.a > f64::NEG_INFINITY
    }

    /// `e ∈ E_r`.
    pub fn has_right(&self) -> bool {
        self.b < f64::INFINITY
    }

    pub fn is_compact(&self) -> bool {
        self.has_left() && self.has_right()
    }
}

/// Summary produced by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    /// Infimum of the edge lengths (`+∞` for a graph without edges).
    pub min_edge_length: f64,
    pub left_count: usize,
    pub right_count: usize,
    pub boundary_count: usize,
    /// `(vertex, number of attached edge ends)` in vertex declaration order.
    pub degrees: Vec<(String, usize)>,
    pub compact: bool,
}

/// A validated metric graph. Construction checks every structural invariant;
/// afterwards the graph is immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    report: GraphReport,
}

/// Checks the graph invariants and collects every violation.
pub fn validate_graph(vertices: &[String], edges: &[Edge], min_edge_length: f64) -> Result<GraphReport> {
    let mut issues = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in vertices {
        if !seen.insert(v.as_str()) {
            issues.push(format!("duplicate vertex '{v}'"));
        }
    }
    let vertex_pos = |name: &str| vertices.iter().position(|v| v == name);
    let mut edge_ids = std::collections::HashSet::new();
    let mut degrees = vec![0usize; vertices.len()];
    for e in edges {
        let id = &e.id;
        if !edge_ids.insert(id.as_str()) {
            issues.push(format!("duplicate edge id '{id}'"));
        }
        if e.a.is_nan() || e.b.is_nan() || e.a == f64::INFINITY || e.b == f64::NEG_INFINITY {
            issues.push(format!("edge '{id}': invalid endpoints ({}, {})", e.a, e.b));
            continue;
        }
        if e.a == e.b {
            issues.push(format!("edge '{id}': zero length (a = b = {})", e.a));
        } else if e.a > e.b {
            issues.push(format!("edge '{id}': a = {} exceeds b = {}", e.a, e.b));
        } else if e.length() < min_edge_length {
            issues.push(format!(
                "edge '{id}': length {} below the minimum edge length {min_edge_length}",
                e.length()
            ));
        }
        for (end, finite, gamma) in [("gamma0", e.has_left(), &e.gamma0), ("gamma1", e.has_right(), &e.gamma1)] {
            match (finite, gamma) {
                (true, None) => issues.push(format!("edge '{id}': finite endpoint without {end}")),
                (false, Some(v)) => issues.push(format!("edge '{id}': {end} = '{v}' given for an infinite endpoint")),
                (true, Some(v)) => match vertex_pos(v) {
                    Some(i) => degrees[i] += 1,
                    None => issues.push(format!("edge '{id}': {end} references unknown vertex '{v}'")),
                },
                (false, None) => {}
            }
        }
    }
    if min_edge_length.is_nan() || min_edge_length <= 0.0 {
        issues.push(format!("minimum edge length must be positive, got {min_edge_length}"));
    }
    if !issues.is_empty() {
        return Err(GraphError::Invalid(issues));
    }
    let left_count = edges.iter().filter(|e| e.has_left()).count();
    let right_count = edges.iter().filter(|e| e.has_right()).count();
    Ok(GraphReport {
        min_edge_length: edges.iter().map(Edge::length).fold(f64::INFINITY, f64::min),
        left_count,
        right_count,
        boundary_count: left_count + right_count,
        degrees: vertices.iter().cloned().zip(degrees).collect(),
        compact: edges.iter().all(Edge::is_compact),
    })
}

impl MetricGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        Self::with_min_edge_length(vertices, edges, DEFAULT_MIN_EDGE_LENGTH)
    }

    pub fn with_min_edge_length(vertices: Vec<String>, edges: Vec<Edge>, min_edge_length: f64) -> Result<Self> {
        let report = validate_graph(&vertices, &edges, min_edge_length)?;
        Ok(Self { vertices, edges, report })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn report(&self) -> &GraphReport {
        &self.report
    }

    pub fn is_compact(&self) -> bool {
        self.report.compact
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Indices of the edges in `E_l`, in declaration order.
    pub fn left_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].has_left()).collect()
    }

    /// Indices of the edges in `E_r`, in declaration order.
    pub fn right_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].has_right()).collect()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges.iter().map(Edge::length).fold(0.0, f64::max)
    }
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

impl MetricGraph {
    /// A single edge `(a, b)` from `v0` to `v1`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(names("v", 2), vec![Edge::finite("e0", a, b, "v0", "v1")])
    }

    /// The half-line `(a, ∞)` starting at `v0`.
    pub fn half_line(a: f64) -> Result<Self> {
        Self::new(names("v", 1), vec![Edge::new("e0", a, f64::INFINITY, Some("v0"), None)])
    }

    /// A single edge of the given length whose two ends meet at `v0`.
    pub fn circle(length: f64) -> Result<Self> {
        Self::new(names("v", 1), vec![Edge::finite("e0", 0.0, length, "v0", "v0")])
    }

    /// Edges `(0, ℓ_i)` from the center `c` to the leaves `v_i`.
    pub fn star(lengths: &[f64]) -> Result<Self> {
        let mut vertices = vec!["c".to_string()];
        vertices.extend(names("v", lengths.len()));
        let edges = lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| Edge::finite(format!("e{i}"), 0.0, l, "c", &format!("v{i}")))
            .collect();
        Self::new(vertices, edges)
    }

    /// Cycle `v0 → v1 → … → v0` with edges `(0, ℓ_i)`.
    pub fn cycle(lengths: &[f64]) -> Result<Self> {
        let n = lengths.len();
        let edges = lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| Edge::finite(format!("e{i}"), 0.0, l, &format!("v{i}"), &format!("v{}", (i + 1) % n)))
            .collect();
        Self::new(names("v", n), edges)
    }

    /// Truncation of the integer line: vertices `−N..=N` (named by the integer),
    /// edges `(n, n+1)` for `n = −N..N−1` with ids `e{n}`.
    pub fn integer_lattice(n: i64) -> Result<Self> {
        let vertices = (-n..=n).map(|k| k.to_string()).collect();
        let edges = (-n..n)
            .map(|k| Edge::finite(format!("e{k}"), k as f64, (k + 1) as f64, &k.to_string(), &(k + 1).to_string()))
            .collect();
        Self::new(vertices, edges)
    }
}
