//! Immutable simple undirected graphs on dense vertex indices `0..n`,
//! stored as a symmetric bit-matrix.

use log::warn;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::GraphError;

/// Default vertex capacity of every graph-producing operation.
pub const DEFAULT_MAX_VERTICES: usize = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    m: usize,
}

/// A graph plus the number of duplicate input edges that were collapsed.
#[derive(Debug, Clone)]
pub struct BuiltGraph {
    pub graph: Graph,
    pub duplicates: usize,
}

/// Builds a graph from unordered pairs, collapsing duplicates.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<BuiltGraph, GraphError> {
    build_graph_capped(n, edges, DEFAULT_MAX_VERTICES)
}

pub fn build_graph_capped(
    n: usize,
    edges: &[(usize, usize)],
    max_vertices: usize,
) -> Result<BuiltGraph, GraphError> {
    if n > max_vertices {
        return Err(GraphError::CapacityExceeded {
            n,
            max: max_vertices,
        });
    }
    let mut adj = vec![VertexSet::new(n); n];
    let mut m = 0;
    let mut duplicates = 0;
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(GraphError::EndpointOutOfRange { u, v, n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if adj[u].insert(v) {
            adj[v].insert(u);
            m += 1;
        } else {
            duplicates += 1;
        }
    }
    if duplicates > 0 {
        warn!("collapsed {duplicates} duplicate edge(s)");
    }
    Ok(BuiltGraph {
        graph: Graph { n, adj, m },
        duplicates,
    })
}

impl Graph {
    /// Convenience wrapper around [`build_graph`] that drops the duplicate tally.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        build_graph(n, edges).map(|b| b.graph)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![VertexSet::new(n); n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut s = VertexSet::full(n);
                s.remove(v);
                s
            })
            .collect();
        Self {
            n,
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are in range")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            out.extend(self.adj[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        self.adj.iter().map(|s| s.to_vec()).collect()
    }

    /// `|N(v) ∩ set|`.
    #[inline]
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.adj[v].intersection_len(set)
    }

    /// Number of edges with both endpoints in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.degree_into(v, set)).sum::<usize>() / 2
    }

    fn check_disjoint(u: &VertexSet, w: &VertexSet) -> Result<(), GraphError> {
        match u.intersection(w).first() {
            Some(v) => Err(GraphError::Overlap(v)),
            None => Ok(()),
        }
    }

    /// `e(U, W)` for disjoint `U`, `W`.
    pub fn edges_between(&self, u: &VertexSet, w: &VertexSet) -> Result<usize, GraphError> {
        Self::check_disjoint(u, w)?;
        Ok(u.iter().map(|v| self.degree_into(v, w)).sum())
    }

    /// `e^c(U, W) = |U||W| - e(U, W)` for disjoint `U`, `W`.
    pub fn missing_between(&self, u: &VertexSet, w: &VertexSet) -> Result<usize, GraphError> {
        Ok(u.len() * w.len() - self.edges_between(u, w)?)
    }

    pub fn induced_subgraph(&self, set: &VertexSet) -> (Graph, Vec<usize>) {
        let verts = set.to_vec();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            for w in self.adj[v].intersection(set).iter() {
                if index[w] > i {
                    edges.push((i, index[w]));
                }
            }
        }
        let g = Graph::from_edges(verts.len(), &edges).expect("induced edges are in range");
        (g, verts)
    }

    /// Same vertex set, with the listed edges removed (absent pairs ignored).
    pub fn without_edges(&self, edges: &[(usize, usize)]) -> Graph {
        let mut adj = self.adj.clone();
        let mut m = self.m;
        for &(u, v) in edges {
            if u < self.n && v < self.n && adj[u].remove(v) {
                adj[v].remove(u);
                m -= 1;
            }
        }
        Graph { n: self.n, adj, m }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let edges: Vec<_> = self
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::from_edges(self.n, &edges).expect("permutation keeps edges in range")
    }

    /// The lexicographically least `k`-clique in sorted order, if any.
    pub fn clique_witness(&self, k: usize) -> Option<Vec<usize>> {
        assert!(k >= 1, "clique size must be at least 1");
        if k > self.n {
            return None;
        }
        let mut stack = Vec::with_capacity(k);
        let cand = VertexSet::full(self.n);
        if self.extend_clique(&cand, k, &mut stack) {
            Some(stack)
        } else {
            None
        }
    }

    fn extend_clique(&self, cand: &VertexSet, k: usize, stack: &mut Vec<usize>) -> bool {
        if stack.len() == k {
            return true;
        }
        let need = k - stack.len();
        // Candidates after v only, so each clique is found in sorted order.
        let mut rest = cand.clone();
        let mut remaining = cand.len();
        for v in cand.iter() {
            if remaining < need {
                return false;
            }
            remaining -= 1;
            rest.remove(v);
            let next = self.adj[v].intersection(&rest);
            if next.len() + 1 < need {
                continue;
            }
            stack.push(v);
            if self.extend_clique(&next, k, stack) {
                return true;
            }
            stack.pop();
        }
        false
    }

    pub fn is_clique_free(&self, k: usize) -> bool {
        self.clique_witness(k).is_none()
    }

    pub fn is_clique(&self, verts: &[usize]) -> bool {
        verts
            .iter()
            .enumerate()
            .all(|(i, &u)| verts[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Replaces vertex `v` of `base` by `sizes[v]` independent copies. Copies of `v`
/// occupy a contiguous block of indices, blocks in the order of `v`.
pub fn blow_up(base: &Graph, sizes: &[usize]) -> Result<Graph, GraphError> {
    assert_eq!(sizes.len(), base.n(), "one size per base vertex");
    let n: usize = sizes.iter().sum();
    if n > DEFAULT_MAX_VERTICES {
        return Err(GraphError::CapacityExceeded {
            n,
            max: DEFAULT_MAX_VERTICES,
        });
    }
    let offsets = block_offsets(sizes);
    let mut edges = Vec::new();
    for (a, b) in base.edges() {
        for x in offsets[a]..offsets[a] + sizes[a] {
            for y in offsets[b]..offsets[b] + sizes[b] {
                edges.push((x, y));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Start index of each block when blocks of the given sizes are laid out in order.
pub fn block_offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect()
}

/// The blocks produced by [`blow_up`] as vertex sets over the blown-up graph.
pub fn blocks(sizes: &[usize]) -> Vec<VertexSet> {
    let n = sizes.iter().sum();
    block_offsets(sizes)
        .into_iter()
        .zip(sizes)
        .map(|(start, &s)| VertexSet::from_vertices(n, start..start + s))
        .collect()
}

/// `G ⊗ H`: disjoint union with every cross pair joined. `G` keeps indices
/// `0..n_G`, `H` is shifted by `n_G`.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    join_capped(g, h, DEFAULT_MAX_VERTICES)
}

pub fn join_capped(g: &Graph, h: &Graph, max_vertices: usize) -> Result<Graph, GraphError> {
    let (ng, nh) = (g.n(), h.n());
    let n = ng + nh;
    if n > max_vertices {
        return Err(GraphError::CapacityExceeded {
            n,
            max: max_vertices,
        });
    }
    let mut edges = g.edges();
    edges.extend(h.edges().into_iter().map(|(u, v)| (u + ng, v + ng)));
    for u in 0..ng {
        for v in 0..nh {
            edges.push((u, v + ng));
        }
    }
    build_graph_capped(n, &edges, max_vertices).map(|b| b.graph)
}

/// Sizes of the balanced complete `r`-partite graph on `n` vertices, larger parts first.
pub fn turan_part_sizes(n: usize, r: usize) -> Vec<usize> {
    assert!(r >= 1, "part count must be at least 1");
    let (q, s) = (n / r, n % r);
    (0..r).map(|i| if i < s { q + 1 } else { q }).collect()
}

/// `ex(n, K_{r+1})`, the edge count of the Turán graph `T(n, r)`.
pub fn turan_number(n: usize, r: usize) -> u64 {
    let sizes = turan_part_sizes(n, r);
    let n = n as u64;
    let sq: u64 = sizes.iter().map(|&s| (s as u64) * (s as u64)).sum();
    (n * n - sq) / 2
}

/// An assignment of every vertex to one of `r` parts with cached internal-edge tallies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    r: usize,
    part_of: Vec<usize>,
    internal: Vec<usize>,
    total: usize,
}

impl Partition {
    pub fn new(g: &Graph, r: usize, part_of: Vec<usize>) -> Result<Self, GraphError> {
        if r == 0 {
            return Err(GraphError::InvalidPartition("zero parts".into()));
        }
        if part_of.len() != g.n() {
            return Err(GraphError::InvalidPartition(format!(
                "{} labels for {} vertices",
                part_of.len(),
                g.n()
            )));
        }
        if let Some((v, &p)) = part_of.iter().enumerate().find(|(_, &p)| p >= r) {
            return Err(GraphError::InvalidPartition(format!(
                "vertex {v} assigned to part {p} of {r}"
            )));
        }
        let mut internal = vec![0; r];
        for (u, v) in g.edges() {
            if part_of[u] == part_of[v] {
                internal[part_of[u]] += 1;
            }
        }
        let total = internal.iter().sum();
        Ok(Self {
            r,
            part_of,
            internal,
            total,
        })
    }

    pub fn from_parts(g: &Graph, parts: &[VertexSet]) -> Result<Self, GraphError> {
        let mut part_of = vec![usize::MAX; g.n()];
        for (i, p) in parts.iter().enumerate() {
            for v in p.iter() {
                if v >= g.n() {
                    return Err(GraphError::InvalidPartition(format!(
                        "vertex {v} outside graph"
                    )));
                }
                if part_of[v] != usize::MAX {
                    return Err(GraphError::Overlap(v));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::InvalidPartition(format!(
                "vertex {v} unassigned"
            )));
        }
        Self::new(g, parts.len(), part_of)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn part_of(&self) -> &[usize] {
        &self.part_of
    }

    pub fn internal_per_part(&self) -> &[usize] {
        &self.internal
    }

    pub fn internal_total(&self) -> usize {
        self.total
    }

    pub fn parts(&self) -> Vec<VertexSet> {
        let n = self.part_of.len();
        let mut parts = vec![VertexSet::new(n); self.r];
        for (v, &p) in self.part_of.iter().enumerate() {
            parts[p].insert(v);
        }
        parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r];
        for &p in &self.part_of {
            sizes[p] += 1;
        }
        sizes
    }

    /// The edges inside parts; deleting them leaves an `r`-partite graph.
    pub fn internal_edge_list(&self, g: &Graph) -> Vec<(usize, usize)> {
        g.edges()
            .into_iter()
            .filter(|&(u, v)| self.part_of[u] == self.part_of[v])
            .collect()
    }
}

/// Per-part and total internal-edge counts of `p` in `g`.
pub fn internal_edges(g: &Graph, p: &Partition) -> (Vec<usize>, usize) {
    let parts = p.parts();
    let per: Vec<usize> = parts.iter().map(|s| g.edges_within(s)).collect();
    let total = per.iter().sum();
    (per, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    fn k23() -> Graph {
        blow_up(&Graph::complete(2), &[2, 3]).unwrap()
    }

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied())
    }

    #[test]
    fn build_examples() {
        let g = c5();
        assert_eq!((g.n(), g.m()), (5, 5));
        assert_eq!(Graph::from_edges(3, &[]).unwrap().m(), 0);
        let b = build_graph(4, &[(0, 1), (0, 1), (2, 3)]).unwrap();
        assert_eq!(b.graph.m(), 2);
        assert_eq!(b.duplicates, 1);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]).unwrap_err(),
            GraphError::EndpointOutOfRange { u: 0, v: 3, n: 3 }
        );
        assert_eq!(
            Graph::from_edges(3, &[(1, 1)]).unwrap_err(),
            GraphError::SelfLoop(1)
        );
        assert!(matches!(
            build_graph_capped(10, &[], 8),
            Err(GraphError::CapacityExceeded { n: 10, max: 8 })
        ));
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(c5().max_degree(), 2);
        assert_eq!(Graph::empty(3).max_degree(), 0);
        assert_eq!(k23().max_degree(), 3);
        assert_eq!(Graph::empty(0).max_degree(), 0);
    }

    #[test]
    fn edges_between_examples() {
        let g = c5();
        assert_eq!(g.edges_between(&set(5, &[0]), &set(5, &[1, 4])).unwrap(), 2);
        assert_eq!(
            g.missing_between(&set(5, &[0]), &set(5, &[1, 4])).unwrap(),
            0
        );
        assert_eq!(g.edges_between(&set(5, &[]), &set(5, &[1, 4])).unwrap(), 0);
        assert_eq!(
            g.missing_between(&set(5, &[]), &set(5, &[1, 4])).unwrap(),
            0
        );
        let k = k23();
        assert_eq!(
            k.edges_between(&set(5, &[0, 1]), &set(5, &[2, 3, 4]))
                .unwrap(),
            6
        );
        assert_eq!(
            k.missing_between(&set(5, &[0, 1]), &set(5, &[2, 3, 4]))
                .unwrap(),
            0
        );
        assert_eq!(
            g.edges_between(&set(5, &[0, 1]), &set(5, &[1]))
                .unwrap_err(),
            GraphError::Overlap(1)
        );
    }

    #[test]
    fn internal_edge_examples() {
        let g = c5();
        let p = Partition::new(&g, 2, vec![0, 1, 0, 0, 1]).unwrap();
        assert_eq!(p.internal_per_part(), &[1, 0]);
        assert_eq!(p.internal_total(), 1);
        assert_eq!(internal_edges(&g, &p), (vec![1, 0], 1));

        let one = Partition::new(&g, 1, vec![0; 5]).unwrap();
        assert_eq!(one.internal_total(), 5);

        let c4 = Graph::cycle(4);
        let p = Partition::new(&c4, 2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(p.internal_total(), 0);
    }

    #[test]
    fn partition_validation() {
        let g = c5();
        assert!(Partition::new(&g, 2, vec![0, 1, 2, 0, 0]).is_err());
        assert!(Partition::new(&g, 2, vec![0, 1]).is_err());
        assert!(Partition::new(&g, 0, vec![]).is_err());
        assert!(Partition::from_parts(&g, &[set(5, &[0, 1]), set(5, &[1, 2, 3, 4])]).is_err());
        assert!(Partition::from_parts(&g, &[set(5, &[0, 1]), set(5, &[2, 3])]).is_err());
    }

    #[test]
    fn clique_examples() {
        assert!(c5().is_clique_free(3));
        assert_eq!(Graph::complete(4).clique_witness(4), Some(vec![0, 1, 2, 3]));
        let t63 = blow_up(&Graph::complete(3), &[2, 2, 2]).unwrap();
        assert!(t63.is_clique_free(4));
        assert_eq!(t63.clique_witness(3), Some(vec![0, 2, 4]));
        assert_eq!(Graph::empty(2).clique_witness(1), Some(vec![0]));
        assert!(Graph::empty(0).is_clique_free(1));
    }

    #[test]
    fn clique_witness_is_lexicographically_least() {
        // Triangles {1,2,3} and {0,4,5}: least sorted tuple is (0,4,5).
        let g = Graph::from_edges(6, &[(1, 2), (2, 3), (1, 3), (0, 4), (4, 5), (0, 5)]).unwrap();
        assert_eq!(g.clique_witness(3), Some(vec![0, 4, 5]));
    }

    #[test]
    fn blow_up_examples() {
        assert_eq!(blow_up(&c5(), &[1; 5]).unwrap(), c5());
        let k = k23();
        assert_eq!((k.n(), k.m()), (5, 6));
        assert_eq!(blow_up(&c5(), &[3, 2, 3, 5, 5]).unwrap().m(), 67);
    }

    #[test]
    fn join_examples() {
        let k1 = Graph::complete(1);
        assert_eq!(join(&k1, &k1).unwrap(), Graph::complete(2));
        let wheel = join(&k1, &c5()).unwrap();
        assert_eq!((wheel.n(), wheel.m()), (6, 10));
        let g = join(&Graph::complete(2), &c5()).unwrap();
        assert_eq!((g.n(), g.m()), (7, 16));
        assert!(matches!(
            join_capped(&c5(), &c5(), 9),
            Err(GraphError::CapacityExceeded { n: 10, max: 9 })
        ));
    }

    #[test]
    fn turan_number_examples() {
        assert_eq!(turan_number(5, 2), 6);
        assert_eq!(turan_number(18, 2), 81);
        assert_eq!(turan_number(6, 3), 12);
        assert_eq!(turan_number(0, 3), 0);
        assert_eq!(turan_number(7, 1), 0);
    }

    #[test]
    fn permuted_preserves_counts() {
        let g = c5().permuted(&[4, 3, 2, 1, 0]);
        assert_eq!(g.m(), 5);
        assert!(g.has_edge(4, 3));
    }
}
