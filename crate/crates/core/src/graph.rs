//! Environment graphs: the external topology an agent walks on.
//!
//! Node ids are 1-based everywhere in the public API so they line up with the
//! labels used in scenario descriptions (start node 1, target node 64, ...).
//! Graphs are immutable once built and every constructor validates them.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CglError, Result};

/// 1-based node identifier.
pub type NodeId = usize;

/// How a graph was produced. Generators record their parameters so that a
/// graph file or manifest fully describes the environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GraphKind {
    Path,
    Lattice {
        rows: usize,
        cols: usize,
    },
    WattsStrogatz {
        k: usize,
        beta: f64,
        seed: u64,
        /// Number of regenerations needed before the rewired graph was connected.
        retries: u32,
    },
    Custom,
}

impl GraphKind {
    pub fn label(&self) -> &'static str {
        match self {
            GraphKind::Path => "path",
            GraphKind::Lattice { .. } => "lattice",
            GraphKind::WattsStrogatz { .. } => "watts_strogatz",
            GraphKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentGraph {
    node_count: usize,
    /// Unordered edges stored as `(u, v)` with `u < v`.
    edges: BTreeSet<(NodeId, NodeId)>,
    kind: GraphKind,
    /// Sorted neighbor lists, index 0 is node 1.
    adjacency: Vec<Vec<NodeId>>,
}

impl EnvironmentGraph {
    /// Builds a graph from an edge list and checks every invariant: ids in
    /// range, no self-loops, no duplicate edges, connected.
    pub fn from_edges<I>(node_count: usize, edges: I, kind: GraphKind) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if node_count == 0 {
            return Err(CglError::InvalidSize("graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            let (a, b) = checked_edge(u, v, node_count)?;
            if !set.insert((a, b)) {
                return Err(CglError::Validation(format!("duplicate edge ({a}, {b})")));
            }
        }
        let graph = Self::assemble(node_count, set, kind);
        if !graph.is_connected() {
            return Err(CglError::Validation(format!(
                "graph with {node_count} nodes is not connected"
            )));
        }
        Ok(graph)
    }

    fn assemble(node_count: usize, edges: BTreeSet<(NodeId, NodeId)>, kind: GraphKind) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u - 1].push(v);
            adjacency[v - 1].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            node_count,
            edges,
            kind,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    /// Edges in ascending `(u, v)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        (1..=self.node_count).contains(&v)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(CglError::NodeOutOfRange {
                node: v,
                max: self.node_count,
            })
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    /// Sorted neighbors of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v - 1]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v - 1].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Lattice dimensions, if this graph was generated as a lattice.
    pub fn lattice_shape(&self) -> Option<(usize, usize)> {
        match self.kind {
            GraphKind::Lattice { rows, cols } => Some((rows, cols)),
            _ => None,
        }
    }

    /// Breadth-first hop distances from `source`; `None` for unreachable nodes.
    pub fn distances_from(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        if !self.contains_node(source) {
            return dist;
        }
        let mut queue = VecDeque::from([source]);
        dist[source - 1] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u - 1].unwrap_or(0);
            for &w in self.neighbors(u) {
                if dist[w - 1].is_none() {
                    dist[w - 1] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(1).iter().all(Option::is_some)
    }

    /// Re-checks the structural invariants. Constructors already guarantee
    /// them; this exists for tests and for graphs read back from disk.
    pub fn validate(&self) -> Result<()> {
        for &(u, v) in &self.edges {
            checked_edge(u, v, self.node_count)?;
            if u >= v {
                return Err(CglError::Validation(format!("edge ({u}, {v}) not normalized")));
            }
        }
        if !self.is_connected() {
            return Err(CglError::Validation("graph is not connected".into()));
        }
        Ok(())
    }
}

fn checked_edge(u: NodeId, v: NodeId, node_count: usize) -> Result<(NodeId, NodeId)> {
    for node in [u, v] {
        if node == 0 || node > node_count {
            return Err(CglError::NodeOutOfRange { node, max: node_count });
        }
    }
    if u == v {
        return Err(CglError::Validation(format!("self-loop at node {u}")));
    }
    Ok(if u < v { (u, v) } else { (v, u) })
}

/// Linear chain `1 - 2 - ... - n`.
pub fn generate_path(n: usize) -> Result<EnvironmentGraph> {
    if n < 2 {
        return Err(CglError::InvalidSize(format!("path needs n >= 2, got {n}")));
    }
    EnvironmentGraph::from_edges(n, (1..n).map(|i| (i, i + 1)), GraphKind::Path)
}

/// 4-neighbor grid. Cell `(r, c)` (both 1-based) has id `(r - 1) * cols + c`.
pub fn generate_lattice(rows: usize, cols: usize) -> Result<EnvironmentGraph> {
    if rows < 2 || cols < 2 {
        return Err(CglError::InvalidSize(format!(
            "lattice needs both dimensions >= 2, got {rows}x{cols}"
        )));
    }
    let id = |r: usize, c: usize| (r - 1) * cols + c;
    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 1..=rows {
        for c in 1..=cols {
            if c < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    EnvironmentGraph::from_edges(rows * cols, edges, GraphKind::Lattice { rows, cols })
}

/// Watts-Strogatz small-world graph.
///
/// Starts from a ring where each node links to `k / 2` neighbors on each side,
/// then visits the clockwise edges lap by lap (first all distance-1 edges,
/// then distance-2, ...) and rewires the far endpoint with probability `beta`
/// to a uniformly drawn node, redrawing while the draw would create a
/// self-loop or duplicate. A disconnected result is regenerated from
/// `seed + 1`, `seed + 2`, ...; the retry count is kept in the graph kind.
pub fn generate_watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<EnvironmentGraph> {
    if !k.is_multiple_of(2) || k < 2 || k >= n {
        return Err(CglError::InvalidParameter(format!(
            "Watts-Strogatz needs even k with 2 <= k < n, got n={n}, k={k}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(CglError::InvalidParameter(format!(
            "rewiring probability must lie in [0, 1], got {beta}"
        )));
    }
    const MAX_RETRIES: u32 = 1000;
    for retries in 0..MAX_RETRIES {
        let attempt_seed = seed.wrapping_add(u64::from(retries));
        let edges = watts_strogatz_edges(n, k, beta, attempt_seed);
        let kind = GraphKind::WattsStrogatz { k, beta, seed, retries };
        let graph = EnvironmentGraph::assemble(n, edges, kind);
        if graph.is_connected() {
            graph.validate()?;
            return Ok(graph);
        }
    }
    Err(CglError::Validation(format!(
        "no connected Watts-Strogatz graph after {MAX_RETRIES} seeds starting at {seed}"
    )))
}

fn watts_strogatz_edges(n: usize, k: usize, beta: f64, seed: u64) -> BTreeSet<(NodeId, NodeId)> {
    // 0-based adjacency sets while rewiring.
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    if beta > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for j in 1..=k / 2 {
            for u in 0..n {
                let v = (u + j) % n;
                if !rng.gen_bool(beta) {
                    continue;
                }
                // A node already linked to everyone has nowhere to go.
                if adj[u].len() >= n - 1 {
                    continue;
                }
                let w = loop {
                    let w = rng.gen_range(0..n);
                    if w != u && !adj[u].contains(&w) {
                        break w;
                    }
                };
                adj[u].remove(&v);
                adj[v].remove(&u);
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
    }
    let mut edges = BTreeSet::new();
    for (u, list) in adj.iter().enumerate() {
        for &v in list.iter().filter(|&&v| v > u) {
            edges.insert((u + 1, v + 1));
        }
    }
    edges
}

/// Random spanning tree plus extra random edges. Used by property tests and
/// the oracle cross-check to get varied connected graphs.
pub fn generate_random_connected(n: usize, extra_edges: usize, seed: u64) -> Result<EnvironmentGraph> {
    if n < 2 {
        return Err(CglError::InvalidSize(format!("need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        edges.insert((parent.min(child), parent.max(child)));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (edges.len() + extra_edges).min(max_edges);
    while edges.len() < target {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    EnvironmentGraph::from_edges(n, edges, GraphKind::Custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_25_degree_sequence() {
        let g = generate_path(25).unwrap();
        assert_eq!(g.node_count(), 25);
        assert_eq!(g.edge_count(), 24);
        let mut expected = vec![2; 25];
        expected[0] = 1;
        expected[24] = 1;
        assert_eq!(g.degrees(), expected);
    }

    #[test]
    fn path_two_and_three() {
        let g = generate_path(2).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        let g = generate_path(3).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
        assert!(matches!(generate_path(1), Err(CglError::InvalidSize(_))));
    }

    #[test]
    fn lattice_counts() {
        let g = generate_lattice(8, 8).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (64, 112));
        let g = generate_lattice(10, 10).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (100, 180));
        let g = generate_lattice(2, 2).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 4), (3, 4)]);
        assert!(generate_lattice(1, 5).is_err());
    }

    #[test]
    fn lattice_edge_formula_small_range() {
        for rows in 2..=20 {
            for cols in 2..=20 {
                let g = generate_lattice(rows, cols).unwrap();
                assert_eq!(g.edge_count(), rows * (cols - 1) + cols * (rows - 1));
            }
        }
    }

    #[test]
    fn lattice_ids_are_row_major() {
        let g = generate_lattice(3, 4).unwrap();
        // cell (2, 3) -> id 7; neighbors (1,3)=3, (2,2)=6, (2,4)=8, (3,3)=11
        assert_eq!(g.neighbors(7), &[3, 6, 8, 11]);
    }

    #[test]
    fn ring_lattice_at_beta_zero() {
        let a = generate_watts_strogatz(100, 4, 0.0, 1).unwrap();
        let b = generate_watts_strogatz(100, 4, 0.0, 99).unwrap();
        assert_eq!(a.edge_count(), 200);
        assert!(a.degrees().iter().all(|&d| d == 4));
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }

    #[test]
    fn fully_rewired_is_connected() {
        let g = generate_watts_strogatz(100, 4, 1.0, 7).unwrap();
        assert_eq!(g.edge_count(), 200);
        assert!(g.is_connected());
        assert!(g.degrees().iter().all(|&d| d >= 2));
        let again = generate_watts_strogatz(100, 4, 1.0, 7).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn watts_strogatz_rejects_bad_parameters() {
        assert!(generate_watts_strogatz(100, 3, 0.1, 0).is_err());
        assert!(generate_watts_strogatz(10, 10, 0.1, 0).is_err());
        assert!(generate_watts_strogatz(100, 4, 1.5, 0).is_err());
        assert!(generate_watts_strogatz(100, 0, 0.5, 0).is_err());
    }

    #[test]
    fn custom_graph_validation() {
        assert!(matches!(
            EnvironmentGraph::from_edges(3, [(1, 1)], GraphKind::Custom),
            Err(CglError::Validation(_))
        ));
        assert!(matches!(
            EnvironmentGraph::from_edges(3, [(0, 1)], GraphKind::Custom),
            Err(CglError::NodeOutOfRange { node: 0, .. })
        ));
        assert!(EnvironmentGraph::from_edges(4, [(1, 2), (3, 4)], GraphKind::Custom).is_err());
        assert!(EnvironmentGraph::from_edges(3, [(1, 2), (2, 1), (2, 3)], GraphKind::Custom).is_err());
    }

    #[test]
    fn hop_distances() {
        let g = generate_lattice(8, 8).unwrap();
        let d = g.distances_from(1);
        assert_eq!(d[63], Some(14));
        assert_eq!(d[0], Some(0));
    }
}
