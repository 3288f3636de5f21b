//! Simple undirected graphs with cached all-pairs BFS distances.
//!
//! Vertices are labelled `0..n-1`. Graphs are immutable after construction
//! and safe to share read-only across threads; the distance matrix is
//! computed eagerly so every later query is a lookup.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Sentinel distance between vertices in different components.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Graphs must have at least one vertex.
    NoVertices,
    /// Self-loops are not representable.
    SelfLoop { vertex: usize },
    /// A vertex label outside `0..n`.
    VertexOutOfRange { vertex: usize, order: usize },
    /// The operation needs at least one edge.
    NoEdges,
    /// A walk count no longer fits the 128-bit accumulator.
    WalkCountOverflow { length: usize },
    /// A vertex appears in more than one class of a partition.
    OverlappingClasses { vertex: usize },
    /// A vertex is missing from every class of a partition.
    UncoveredVertex { vertex: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NoVertices => write!(f, "graph must have at least one vertex"),
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            GraphError::VertexOutOfRange { vertex, order } => {
                write!(f, "vertex {vertex} out of range for order {order}")
            }
            GraphError::NoEdges => write!(f, "graph has no edges"),
            GraphError::WalkCountOverflow { length } => {
                write!(f, "walk count of length {length} overflows 128 bits")
            }
            GraphError::OverlappingClasses { vertex } => {
                write!(f, "vertex {vertex} appears in more than one class")
            }
            GraphError::UncoveredVertex { vertex } => {
                write!(f, "vertex {vertex} is not covered by any class")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// All-pairs shortest-path distances of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    /// Distance between `u` and `v`, or `None` when they lie in different
    /// components.
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        let raw = self.d[u * self.n + v];
        (raw != UNREACHABLE).then_some(raw)
    }

    /// Raw entry with [`UNREACHABLE`] standing in for infinity.
    pub fn raw(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    /// True iff `d(u,v) <= k` (unreachable pairs are never within range).
    pub fn within(&self, u: usize, v: usize, k: u32) -> bool {
        self.d[u * self.n + v] <= k
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    dist: DistanceMatrix,
}

impl Graph {
    /// Builds a graph from an edge list. Edges may repeat and may be given in
    /// either orientation; self-loops and out-of-range labels are rejected.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edge_list {
            if u >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u,
                    order: n,
                });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    order: n,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adj = vec![false; n * n];
        let mut degrees = vec![0usize; n];
        for &(u, v) in &edges {
            adj[u * n + v] = true;
            adj[v * n + u] = true;
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let dist = bfs_all_pairs(n, &adj);
        Ok(Graph {
            n,
            adj,
            edges,
            degrees,
            dist,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.degrees[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        (0..n).filter(move |&v| self.adj[u * n + v])
    }

    /// Cached BFS distance matrix.
    pub fn distances(&self) -> &DistanceMatrix {
        &self.dist
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        self.dist.d[..self.n].iter().all(|&x| x != UNREACHABLE)
    }

    /// Largest finite distance; `None` when the graph is disconnected.
    pub fn diameter(&self) -> Option<u32> {
        let mut m = 0;
        for &x in &self.dist.d {
            if x == UNREACHABLE {
                return None;
            }
            m = m.max(x);
        }
        Some(m)
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let comp: Vec<usize> = (s..self.n)
                .filter(|&v| self.dist.raw(s, v) != UNREACHABLE)
                .collect();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]`. Labels must be distinct and in range.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        for &v in vertices {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    order: self.n,
                });
            }
        }
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if self.has_edge(vertices[i], vertices[j]) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(vertices.len(), &edges)
    }
}

fn bfs_all_pairs(n: usize, adj: &[bool]) -> DistanceMatrix {
    let mut d = vec![UNREACHABLE; n * n];
    let mut queue = Vec::with_capacity(n);
    for s in 0..n {
        d[s * n + s] = 0;
        queue.clear();
        queue.push(s);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = d[s * n + u];
            for v in 0..n {
                if adj[u * n + v] && d[s * n + v] == UNREACHABLE {
                    d[s * n + v] = du + 1;
                    queue.push(v);
                }
            }
        }
    }
    DistanceMatrix { n, d }
}

/// The k-th power graph: same vertices, an edge wherever `0 < d(u,v) <= k`.
pub fn power_graph(g: &Graph, k: usize) -> Graph {
    assert!(k >= 1, "power_graph requires k >= 1");
    let n = g.order();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.distances().within(u, v, k as u32) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("power graph of a valid graph is valid")
}

/// Total and closed walk counts of a given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkCounts {
    /// Sum of all entries of `A^t`.
    pub total: u128,
    /// Trace of `A^t`.
    pub closed: u128,
}

/// Counts walks of length `t` in exact integer arithmetic. Overflow of the
/// 128-bit accumulator is reported, never wrapped.
pub fn walk_counts(g: &Graph, t: usize) -> Result<WalkCounts, GraphError> {
    let n = g.order();
    let overflow = || GraphError::WalkCountOverflow { length: t };
    // A^t by repeated multiplication with the 0/1 adjacency matrix.
    let mut power: Vec<u128> = (0..n * n).map(|i| u128::from(i / n == i % n)).collect();
    for _ in 0..t {
        let mut next = vec![0u128; n * n];
        for i in 0..n {
            for kk in 0..n {
                let a = power[i * n + kk];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    if g.adj[kk * n + j] {
                        next[i * n + j] = next[i * n + j].checked_add(a).ok_or_else(overflow)?;
                    }
                }
            }
        }
        power = next;
    }
    let mut total: u128 = 0;
    let mut closed: u128 = 0;
    for i in 0..n {
        for j in 0..n {
            total = total.checked_add(power[i * n + j]).ok_or_else(overflow)?;
        }
        closed = closed.checked_add(power[i * n + i]).ok_or_else(overflow)?;
    }
    Ok(WalkCounts { total, closed })
}

/// Line graph: one vertex per edge of `g` (in the order of [`Graph::edges`]),
/// adjacent iff the edges share an endpoint.
pub fn line_graph(g: &Graph) -> Result<Graph, GraphError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(GraphError::NoEdges);
    }
    let edges = g.edges();
    let mut line_edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                line_edges.push((i, j));
            }
        }
    }
    Graph::new(m, &line_edges)
}

/// True iff all pairwise distances within `s` exceed `k`. Empty and
/// singleton sets are vacuously k-independent; duplicate labels are ignored.
pub fn is_k_independent(g: &Graph, s: &[usize], k: usize) -> Result<bool, GraphError> {
    let n = g.order();
    for &v in s {
        if v >= n {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: n,
            });
        }
    }
    let mut sorted: Vec<usize> = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if g.distances().within(sorted[i], sorted[j], k as u32) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A partition of the vertex set into classes meant to be k-independent
/// (a k-distance coloring when valid).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringPartition {
    pub classes: Vec<Vec<usize>>,
    pub k: usize,
}

/// Checks that `part` is a k-distance coloring. Cover defects (overlapping
/// classes, uncovered vertices, bad labels) are errors; a class that is not
/// k-independent makes the result `false`.
pub fn validate_coloring(g: &Graph, part: &ColoringPartition) -> Result<bool, GraphError> {
    let n = g.order();
    let mut count = vec![0usize; n];
    for class in &part.classes {
        for &v in class {
            if v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    order: n,
                });
            }
            count[v] += 1;
            if count[v] > 1 {
                return Err(GraphError::OverlappingClasses { vertex: v });
            }
        }
    }
    if let Some(v) = count.iter().position(|&c| c == 0) {
        return Err(GraphError::UncoveredVertex { vertex: v });
    }
    for class in &part.classes {
        if !is_k_independent(g, class, part.k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Standard small graphs used throughout the tests and the CLI corpus.
pub mod generators {
    use super::Graph;
    use alloc::vec::Vec;

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).expect("edgeless graph")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).expect("path graph")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle graph")
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("complete graph")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::new(a + b, &edges).expect("complete bipartite graph")
    }

    /// Star with one center (vertex 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        complete_bipartite(1, leaves)
    }

    /// The Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, 5 + i));
        }
        Graph::new(10, &edges).expect("petersen graph")
    }

    /// The d-dimensional hypercube on `2^d` vertices.
    pub fn hypercube(d: u32) -> Graph {
        let n = 1usize << d;
        let mut edges = Vec::new();
        for u in 0..n {
            for b in 0..d {
                let v = u ^ (1 << b);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).expect("hypercube graph")
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    #[test]
    fn construction_rejects_bad_edges() {
        assert_eq!(Graph::new(0, &[]), err_kind(GraphError::NoVertices));
        assert!(matches!(
            Graph::new(3, &[(1, 1)]),
            Err(GraphError::SelfLoop { vertex: 1 })
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange {
                vertex: 3,
                order: 3
            })
        ));
    }

    fn err_kind(e: GraphError) -> Result<Graph, GraphError> {
        Err(e)
    }

    #[test]
    fn duplicate_and_flipped_edges_collapse() {
        let g = Graph::new(3, &[(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn distances_on_c5() {
        let g = cycle(5);
        let mut at_two = 0;
        for u in 0..5 {
            assert_eq!(g.distances().get(u, u), Some(0));
            for v in u + 1..5 {
                let d = g.distances().get(u, v).unwrap();
                assert!(d == 1 || d == 2);
                assert_eq!(g.distances().get(v, u).unwrap(), d);
                assert_eq!(d == 1, g.has_edge(u, v));
                if d == 2 {
                    at_two += 1;
                }
            }
        }
        assert_eq!(at_two, 5);
    }

    #[test]
    fn distances_disconnected_and_singleton() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(g.distances().get(0, 2), None);
        assert_eq!(g.distances().raw(0, 2), UNREACHABLE);
        assert!(!g.is_connected());
        assert_eq!(g.diameter(), None);

        let single = Graph::new(1, &[]).unwrap();
        assert_eq!(single.distances().get(0, 0), Some(0));
        assert!(single.is_connected());
    }

    #[test]
    fn triangle_inequality_on_petersen() {
        let g = petersen();
        let d = g.distances();
        for u in 0..10 {
            for v in 0..10 {
                for w in 0..10 {
                    assert!(d.raw(u, w) <= d.raw(u, v) + d.raw(v, w));
                }
            }
        }
    }

    #[test]
    fn power_of_c6_at_two_misses_antipodes() {
        let g = power_graph(&cycle(6), 2);
        for u in 0..6 {
            assert_eq!(g.degree(u), 4);
            assert!(!g.has_edge(u, (u + 3) % 6));
        }
    }

    #[test]
    fn power_at_one_is_identity() {
        let g = petersen();
        let p = power_graph(&g, 1);
        assert_eq!(p.edges(), g.edges());
    }

    #[test]
    fn petersen_squared_is_complete() {
        let g = petersen();
        assert_eq!(g.diameter(), Some(2));
        let p = power_graph(&g, 2);
        assert_eq!(p.edge_count(), 45);
    }

    #[test]
    fn walk_counts_examples() {
        let c4 = cycle(4);
        let w = walk_counts(&c4, 2).unwrap();
        assert_eq!(w.total, 16);
        assert_eq!(w.closed, 8);

        let w0 = walk_counts(&petersen(), 0).unwrap();
        assert_eq!(w0.total, 10);
        assert_eq!(w0.closed, 10);

        let we = walk_counts(&empty(4), 3).unwrap();
        assert_eq!(we.total, 0);
        assert_eq!(we.closed, 0);
    }

    #[test]
    fn walk_counts_overflow_reported() {
        let g = complete(20);
        // 19^t exceeds 2^128 near t = 102.
        let err = walk_counts(&g, 110).unwrap_err();
        assert_eq!(err, GraphError::WalkCountOverflow { length: 110 });
    }

    #[test]
    fn line_graph_examples() {
        let l = line_graph(&path(3)).unwrap();
        assert_eq!((l.order(), l.edge_count()), (2, 1));

        let l = line_graph(&complete(3)).unwrap();
        assert_eq!((l.order(), l.edge_count()), (3, 3));

        let l = line_graph(&star(3)).unwrap();
        assert_eq!((l.order(), l.edge_count()), (3, 3));

        assert_eq!(line_graph(&empty(2)), Err(GraphError::NoEdges));
    }

    #[test]
    fn k_independence_on_c6() {
        let g = cycle(6);
        assert!(is_k_independent(&g, &[0, 3], 2).unwrap());
        assert!(!is_k_independent(&g, &[0, 2], 2).unwrap());
        assert!(is_k_independent(&g, &[], 2).unwrap());
        assert!(is_k_independent(&g, &[4], 2).unwrap());
        assert!(is_k_independent(&g, &[4, 4], 5).unwrap());
        assert!(is_k_independent(&g, &[0, 6], 1).is_err());
    }

    #[test]
    fn coloring_validation() {
        let g = cycle(4);
        let good = ColoringPartition {
            classes: alloc::vec![alloc::vec![0, 2], alloc::vec![1, 3]],
            k: 1,
        };
        assert!(validate_coloring(&g, &good).unwrap());

        let bad = ColoringPartition {
            classes: alloc::vec![alloc::vec![0, 1], alloc::vec![2, 3]],
            k: 1,
        };
        assert!(!validate_coloring(&g, &bad).unwrap());

        let singletons = ColoringPartition {
            classes: (0..4).map(|v| alloc::vec![v]).collect(),
            k: 3,
        };
        assert!(validate_coloring(&g, &singletons).unwrap());

        let overlap = ColoringPartition {
            classes: alloc::vec![alloc::vec![0, 1], alloc::vec![1, 2, 3]],
            k: 1,
        };
        assert_eq!(
            validate_coloring(&g, &overlap),
            Err(GraphError::OverlappingClasses { vertex: 1 })
        );

        let uncovered = ColoringPartition {
            classes: alloc::vec![alloc::vec![0, 2], alloc::vec![3]],
            k: 1,
        };
        assert_eq!(
            validate_coloring(&g, &uncovered),
            Err(GraphError::UncoveredVertex { vertex: 1 })
        );
    }

    #[test]
    fn power_edges_match_pair_independence() {
        for k in 1..=3 {
            let g = petersen();
            let p = power_graph(&g, k);
            for u in 0..10 {
                for v in u + 1..10 {
                    let indep = is_k_independent(&g, &[u, v], k).unwrap();
                    assert_eq!(p.has_edge(u, v), !indep);
                }
            }
        }
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps, alloc::vec![alloc::vec![0, 1, 2], alloc::vec![3, 4]]);
        let h = g.induced_subgraph(&comps[0]).unwrap();
        assert_eq!((h.order(), h.edge_count()), (3, 2));
        assert!(h.has_edge(0, 1) && h.has_edge(1, 2) && !h.has_edge(0, 2));
    }

    #[test]
    fn generator_shapes() {
        assert_eq!(petersen().regular_degree(), Some(3));
        assert_eq!(hypercube(3).regular_degree(), Some(3));
        assert_eq!(hypercube(3).diameter(), Some(3));
        assert_eq!(star(3).degree(0), 3);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(path(1).edge_count(), 0);
    }
}
