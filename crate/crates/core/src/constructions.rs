//! Builders for metric spaces: graph metrics, the discrete metric, the
//! gravitational truncation, the lexicographic product, the squash
//! transform and fiber extraction.

use alloc::borrow::ToOwned;
use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::metric::{FiniteMetricSpace, PointId};
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// Undirected graph with positive edge weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    vertices: Vec<PointId>,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<I, P>(labels: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PointId>,
    {
        let mut g = Graph::new();
        for l in labels {
            g.add_vertex(l);
        }
        g
    }

    /// Adds a vertex if missing and returns its index.
    pub fn add_vertex(&mut self, label: impl Into<PointId>) -> usize {
        let label = label.into();
        match self.vertices.iter().position(|v| *v == label) {
            Some(i) => i,
            None => {
                self.vertices.push(label);
                self.vertices.len() - 1
            }
        }
    }

    pub fn add_edge(
        &mut self,
        u: impl Into<PointId>,
        v: impl Into<PointId>,
        weight: f64,
    ) -> Result<()> {
        let (u, v) = (u.into(), v.into());
        if u == v {
            return Err(Error::SelfLoop(u.as_str().to_owned()));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::BadWeight {
                from: u.as_str().to_owned(),
                to: v.as_str().to_owned(),
                weight,
            });
        }
        let a = self.add_vertex(u);
        let b = self.add_vertex(v);
        self.edges.push((a, b, weight));
        Ok(())
    }

    pub fn add_unit_edge(&mut self, u: impl Into<PointId>, v: impl Into<PointId>) -> Result<()> {
        self.add_edge(u, v, 1.0)
    }

    pub fn vertices(&self) -> &[PointId] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&PointId, &PointId, f64)> {
        self.edges
            .iter()
            .map(|&(a, b, w)| (&self.vertices[a], &self.vertices[b], w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Path `v0 - v1 - ... - v{n-1}`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::with_vertices((0..n).map(vertex_label));
        for i in 1..n {
            g.edges.push((i - 1, i, 1.0));
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n > 2 {
            g.edges.push((n - 1, 0, 1.0));
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::with_vertices((0..n).map(vertex_label));
        for i in 0..n {
            for j in (i + 1)..n {
                g.edges.push((i, j, 1.0));
            }
        }
        g
    }

    fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }
}

/// Labels `v0, v1, ...` used by the named graph families.
pub fn vertex_label(i: usize) -> PointId {
    PointId::new(alloc::format!("v{i}"))
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then index
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn bfs(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut queue = VecDeque::new();
    dist[src] = 0.0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adj[u] {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + 1.0;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Frontier(0.0, src));
    while let Some(Frontier(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Frontier(nd, v));
            }
        }
    }
    dist
}

/// All-pairs shortest-path metric of a connected graph. Unit-weight graphs
/// use breadth-first search, others Dijkstra, one run per source.
pub fn graph_metric(g: &Graph) -> Result<FiniteMetricSpace> {
    graph_metric_with_tolerance(g, DEFAULT_TOLERANCE)
}

pub fn graph_metric_with_tolerance(g: &Graph, tolerance: f64) -> Result<FiniteMetricSpace> {
    let n = g.vertices.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let adj = g.adjacency();
    let unit = g.edges.iter().all(|e| e.2 == 1.0);
    let mut flat = Vec::with_capacity(n * n);
    for src in 0..n {
        let row = if unit { bfs(&adj, src) } else { dijkstra(&adj, src) };
        if let Some(to) = row.iter().position(|d| d.is_infinite()) {
            return Err(Error::Disconnected {
                from: g.vertices[src].as_str().to_owned(),
                to: g.vertices[to].as_str().to_owned(),
            });
        }
        flat.extend(row);
    }
    FiniteMetricSpace::from_flat(g.vertices.clone(), flat, tolerance)
}

/// The discrete metric on `n` points labelled `v0..`.
pub fn discrete_metric(n: usize) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    FiniteMetricSpace::from_fn(
        (0..n).map(vertex_label).collect(),
        DEFAULT_TOLERANCE,
        |i, j| if i == j { 0.0 } else { 1.0 },
    )
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Gravitational space `M_t`: every distance replaced by `min{2t, d}`.
pub fn gravitational(space: &FiniteMetricSpace, t: f64) -> Result<FiniteMetricSpace> {
    positive("t", t)?;
    let cap = 2.0 * t;
    Ok(space.map_distances(|d| d.min(cap)))
}

/// Bounded transform `d* = ηd / (η + d)`. Strictly increasing in `d`, so
/// every distance comparison is preserved, and every distance is below `η`.
pub fn squash(eta: f64, space: &FiniteMetricSpace) -> Result<FiniteMetricSpace> {
    positive("eta", eta)?;
    Ok(space.map_distances(|d| eta * d / (eta + d)))
}

/// The lexicographic product `M ∘ M′` with provenance for each point.
///
/// Points are ordered base-major: index `i·|Y| + j` is `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    space: FiniteMetricSpace,
    bases: Vec<PointId>,
    fibers: Vec<PointId>,
    base_nearness: Vec<f64>,
}

impl ProductSpace {
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn into_space(self) -> FiniteMetricSpace {
        self.space
    }

    pub fn base_points(&self) -> &[PointId] {
        &self.bases
    }

    pub fn fiber_points(&self) -> &[PointId] {
        &self.fibers
    }

    /// Base coordinate of product point `i`.
    pub fn base_of(&self, i: usize) -> &PointId {
        &self.bases[i / self.fibers.len()]
    }

    /// Fiber coordinate of product point `i`.
    pub fn fiber_of(&self, i: usize) -> &PointId {
        &self.fibers[i % self.fibers.len()]
    }

    pub fn index(&self, base: usize, fiber: usize) -> usize {
        base * self.fibers.len() + fiber
    }

    /// The subspace `{x} × Y`, relabelled with the fiber labels. Isometric
    /// to `gravitational(M′, η(x))`.
    pub fn fiber(&self, base: &str) -> Result<FiniteMetricSpace> {
        let b = self
            .bases
            .iter()
            .position(|p| p.as_str() == base)
            .ok_or_else(|| Error::UnknownPoint(base.to_owned()))?;
        let m = self.fibers.len();
        let idx: Vec<usize> = (0..m).map(|j| self.index(b, j)).collect();
        self.space.subspace(&idx)?.relabel(self.fibers.clone())
    }

    /// `η(x)` in the base space, used as the fiber's gravitation constant.
    pub fn base_nearness(&self, base: usize) -> f64 {
        self.base_nearness[base]
    }
}

/// Lexicographic product with distance
/// `ρ((x,y),(x′,y′)) = d_X(x,x′)` when `x ≠ x′`, else `min{2η(x), d_Y(y,y′)}`.
/// The cap uses the per-point nearness `η(x)`, not `η(M)`.
///
/// The product tolerance is the larger of the two input tolerances.
pub fn lexicographic(m: &FiniteMetricSpace, m2: &FiniteMetricSpace) -> Result<ProductSpace> {
    let eta = m.nearness();
    positive("nearness of the base space", eta)?;
    let (nx, ny) = (m.len(), m2.len());
    let base_nearness: Vec<f64> = (0..nx).map(|i| m.nearness_at(i)).collect();
    let mut labels = Vec::with_capacity(nx * ny);
    for x in m.points() {
        for y in m2.points() {
            labels.push(PointId::pair(x, y));
        }
    }
    let tolerance = m.tolerance().max(m2.tolerance());
    let space = FiniteMetricSpace::from_fn(labels, tolerance, |a, b| {
        let (xa, ya) = (a / ny, a % ny);
        let (xb, yb) = (b / ny, b % ny);
        if xa != xb {
            m.d(xa, xb)
        } else if ya == yb {
            0.0
        } else {
            m2.d(ya, yb).min(2.0 * base_nearness[xa])
        }
    })?;
    Ok(ProductSpace {
        space,
        bases: m.points().to_vec(),
        fibers: m2.points().to_vec(),
        base_nearness,
    })
}
