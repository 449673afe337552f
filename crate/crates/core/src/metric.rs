//! Weighted network graphs, their shortest-path metric and the instance
//! generators used by the corpus.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integral path length. Every edge weighs at least 1.
pub type Length = u64;

/// Dense node index `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge ({u}, {v}) references a node outside 0..{n}")]
    NodeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has weight {w}; weights must be at least 1")]
    InvalidWeight { u: usize, v: usize, w: Length },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph is disconnected: node {0} is unreachable from node 0")]
    DisconnectedGraph(usize),
    #[error("generator failed: {0}")]
    GenerationFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Length,
}

/// Connected, undirected graph with integral weights `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, Length)>>,
}

impl WeightedGraph {
    /// Validates and builds a graph. Edges are stored once, normalized so
    /// that `u < v`, and kept in input order.
    pub fn new(n: usize, edges: &[(usize, usize, Length)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut stored = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w < 1 {
                return Err(GraphError::InvalidWeight { u, v, w });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
            stored.push(Edge { u: NodeId(a), v: NodeId(b), w });
            adjacency[a].push((NodeId(b), w));
            adjacency[b].push((NodeId(a), w));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = WeightedGraph { n, edges: stored, adjacency };
        if let Some(unreached) = graph.first_unreachable() {
            return Err(GraphError::DisconnectedGraph(unreached));
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, Length)] {
        &self.adjacency[v.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId)
    }

    /// Edge list as plain triples, in stored order.
    pub fn edge_triples(&self) -> Vec<(usize, usize, Length)> {
        self.edges.iter().map(|e| (e.u.0, e.v.0, e.w)).collect()
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v.0] {
                    seen[v.0] = true;
                    stack.push(v.0);
                }
            }
        }
        seen.iter().position(|s| !s)
    }
}

/// Exact all-pairs shortest-path table plus the diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceOracle {
    n: usize,
    dist: Vec<Length>,
    diameter: Length,
}

impl DistanceOracle {
    /// One Dijkstra run per source.
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        let mut dist = vec![Length::MAX; n * n];
        let mut heap = BinaryHeap::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            heap.push(Reverse((0, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > row[u] {
                    continue;
                }
                for &(v, w) in g.neighbors(NodeId(u)) {
                    let nd = d + w;
                    if nd < row[v.0] {
                        row[v.0] = nd;
                        heap.push(Reverse((nd, v.0)));
                    }
                }
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);
        DistanceOracle { n, dist, diameter }
    }

    #[inline]
    pub fn dist(&self, u: NodeId, v: NodeId) -> Length {
        self.dist[u.0 * self.n + v.0]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> Length {
        self.diameter
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId)
    }

    /// `N_r(v)`: every node within distance `r` of `v`, `v` included, ascending.
    pub fn neighborhood(&self, v: NodeId, r: f64) -> Vec<NodeId> {
        self.nodes().filter(|&u| self.dist(v, u) as f64 <= r).collect()
    }

    /// Length of the open walk through `nodes` in the given order.
    pub fn walk_length(&self, nodes: &[NodeId]) -> Length {
        nodes.windows(2).map(|p| self.dist(p[0], p[1])).sum()
    }
}

/// Shortest-path table for `g`.
pub fn all_pairs_distances(g: &WeightedGraph) -> DistanceOracle {
    DistanceOracle::new(g)
}

/// Upper-bound estimate of the doubling dimension.
///
/// For every node `v` and every radius `r` in `{1, 2, 4, ..} ∪ {D}` (capped
/// at `D`) a greedy `r/2`-net of `N_r(v)` is built in ascending id order;
/// the estimate is the smallest `δ` with `2^δ` at least the largest net.
pub fn doubling_dimension_estimate(d: &DistanceOracle) -> u32 {
    let diameter = d.diameter();
    let mut radii = Vec::new();
    let mut r: Length = 1;
    while r < diameter {
        radii.push(r);
        r *= 2;
    }
    if diameter > 0 {
        radii.push(diameter);
    }
    let mut largest = 1usize;
    for v in d.nodes() {
        for &r in &radii {
            let half = r as f64 / 2.0;
            let mut net: Vec<NodeId> = Vec::new();
            for u in d.neighborhood(v, r as f64) {
                if net.iter().all(|&p| d.dist(p, u) as f64 > half) {
                    net.push(u);
                }
            }
            largest = largest.max(net.len());
        }
    }
    usize::BITS - (largest - 1).leading_zeros()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    Grid { width: usize, height: usize },
    UnitDisk { n: usize, radius: f64, side: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn grid(width: usize, height: usize) -> Self {
        GeneratorSpec { kind: GeneratorKind::Grid { width, height }, seed: 0 }
    }

    pub fn unit_disk(n: usize, radius: f64, side: f64, seed: u64) -> Self {
        GeneratorSpec { kind: GeneratorKind::UnitDisk { n, radius, side }, seed }
    }
}

/// Placement attempts before a unit-disk generator gives up.
pub const UNIT_DISK_RETRIES: usize = 1000;

/// Builds the graph described by `spec`. Pure in `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<WeightedGraph, GraphError> {
    match spec.kind {
        GeneratorKind::Grid { width, height } => grid(width, height),
        GeneratorKind::UnitDisk { n, radius, side } => unit_disk(n, radius, side, spec.seed),
    }
}

fn grid(width: usize, height: usize) -> Result<WeightedGraph, GraphError> {
    if width == 0 || height == 0 {
        return Err(GraphError::GenerationFailed(format!("grid dimensions must be positive, got {width}x{height}")));
    }
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y), 1));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1), 1));
            }
        }
    }
    WeightedGraph::new(width * height, &edges)
}

fn unit_disk(n: usize, radius: f64, side: f64, seed: u64) -> Result<WeightedGraph, GraphError> {
    if n == 0 || radius.is_nan() || radius <= 0.0 || side.is_nan() || side <= 0.0 {
        return Err(GraphError::GenerationFailed(format!(
            "unit-disk needs n >= 1, radius > 0 and side > 0 (got n={n}, radius={radius}, side={side})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..UNIT_DISK_RETRIES {
        let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.0..side), rng.gen_range(0.0..side))).collect();
        let mut close = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
                let d = (dx * dx + dy * dy).sqrt();
                if d <= radius {
                    close.push((i, j, d));
                }
            }
        }
        let unit = close.iter().map(|c| c.2).filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min);
        let edges: Vec<(usize, usize, Length)> = close
            .iter()
            .map(|&(i, j, d)| {
                let w = if unit.is_finite() { (d / unit).round() as Length } else { 1 };
                (i, j, w.max(1))
            })
            .collect();
        match WeightedGraph::new(n, &edges) {
            Ok(g) => return Ok(g),
            Err(GraphError::DisconnectedGraph(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GraphError::GenerationFailed(format!(
        "no connected unit-disk placement (n={n}, radius={radius}, side={side}) in {UNIT_DISK_RETRIES} attempts"
    )))
}
