//! Undirected multigraphs with loops, edge subsets and degree vectors.
//!
//! Edges are identified by their position in the edge list, so parallel
//! edges are distinguishable. A loop contributes 2 to the degree of its
//! vertex and never appears in a cut.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Default cap on the number of edges for exhaustive subset enumeration.
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
    #[serde(skip)]
    adj: Vec<Vec<(EdgeId, Vertex)>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((id, v));
            if u != v {
                adj[v].push((id, u));
            }
        }
        Ok(Graph { n, edges, labels: None, adj })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(Vertex, Vertex)> {
        self.edges.get(e).copied().ok_or(Error::EdgeOutOfRange { edge: e, m: self.m() })
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Human-readable name of a vertex: its label, or its index.
    pub fn name(&self, v: Vertex) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Incident (edge, other endpoint) pairs; a loop appears once.
    pub fn incident(&self, v: Vertex) -> &[(EdgeId, Vertex)] {
        &self.adj[v]
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn degrees(&self) -> DegreeVector {
        let mut d = vec![0i64; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        DegreeVector(d)
    }

    pub fn degree_vector(&self, f: &EdgeSubset) -> Result<DegreeVector> {
        self.check_subset(f)?;
        let mut d = vec![0i64; self.n];
        for e in f.ids() {
            let (u, v) = self.edges[e];
            d[u] += 1;
            d[v] += 1;
        }
        Ok(DegreeVector(d))
    }

    pub fn check_subset(&self, f: &EdgeSubset) -> Result<()> {
        if f.len() != self.m() {
            return Err(Error::SubsetLength { got: f.len(), expected: self.m() });
        }
        Ok(())
    }

    fn membership(&self, w: &[Vertex]) -> Result<Vec<bool>> {
        let mut inside = vec![false; self.n];
        for &v in w {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        Ok(inside)
    }

    /// The cut δ(W): non-loop edges with exactly one endpoint in `w`.
    pub fn boundary(&self, w: &[Vertex]) -> Result<EdgeSubset> {
        let inside = self.membership(w)?;
        let mut cut = EdgeSubset::empty(self.m());
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if inside[u] != inside[v] {
                cut.insert(id);
            }
        }
        Ok(cut)
    }

    /// Number of edges with one endpoint in `a` and the other in `b`
    /// (the sets must be disjoint).
    pub fn edges_between(&self, a: &[bool], b: &[bool]) -> i64 {
        self.edges
            .iter()
            .filter(|&&(u, v)| (a[u] && b[v]) || (a[v] && b[u]))
            .count() as i64
    }

    /// Connected components of the subgraph induced by `w`, each sorted,
    /// ordered by smallest vertex.
    pub fn components(&self, w: &[Vertex]) -> Result<Vec<Vec<Vertex>>> {
        let inside = self.membership(w)?;
        Ok(self.components_masked(&inside, |_| true))
    }

    /// Components of the subgraph induced by `inside`, using only edges
    /// accepted by `keep`.
    pub fn components_masked(
        &self,
        inside: &[bool],
        keep: impl Fn(EdgeId) -> bool,
    ) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if !inside[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(e, y) in &self.adj[x] {
                    if inside[y] && !seen[y] && keep(e) {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<Vertex> = (0..self.n).collect();
        self.n == 0 || self.components(&all).map(|c| c.len() == 1).unwrap_or(false)
    }

    /// Two-colouring side per vertex (`false` for the smallest vertex of each
    /// component), or `None` if an odd cycle or a loop exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].unwrap();
                for &(_, y) in &self.adj[x] {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Subdivide every edge once. New vertex `n + e` sits on edge `e`; the
    /// halves `(u, n+e)` and `(n+e, v)` get ids `2e` and `2e+1`.
    pub fn subdivide(&self) -> (Graph, Vec<Subdivision>) {
        let mut edges = Vec::with_capacity(2 * self.m());
        let mut map = Vec::with_capacity(self.m());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let mid = self.n + e;
            edges.push((u, mid));
            edges.push((mid, v));
            map.push(Subdivision { vertex: mid, first: 2 * e, second: 2 * e + 1 });
        }
        let g = Graph::new(self.n + self.m(), edges).expect("subdivision is well formed");
        (g, map)
    }

    /// Contract the edges of `f`; see [`Contraction`] for the vertex and edge
    /// correspondence.
    pub fn contract_with_map(&self, f: &EdgeSubset) -> Result<Contraction> {
        self.check_subset(f)?;
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in f.ids() {
            let (u, v) = self.edges[e];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut root_id = vec![usize::MAX; self.n];
        let mut vertex_map = vec![0; self.n];
        let mut next = 0;
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if root_id[r] == usize::MAX {
                root_id[r] = next;
                next += 1;
            }
            vertex_map[v] = root_id[r];
        }
        let mut edges = Vec::new();
        let mut edge_map = vec![None; self.m()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if f.contains(e) {
                continue;
            }
            edge_map[e] = Some(edges.len());
            edges.push((vertex_map[u], vertex_map[v]));
        }
        Ok(Contraction { graph: Graph::new(next, edges)?, vertex_map, edge_map })
    }

    /// G / F. Non-contracted edges whose endpoints merge become loops.
    pub fn contract(&self, f: &EdgeSubset) -> Result<Graph> {
        Ok(self.contract_with_map(f)?.graph)
    }

    /// Subgraph induced by `keep`, with vertices renumbered in increasing
    /// order. Returns the graph and the original id of each new vertex.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<Vertex>) {
        let mut new_id = vec![usize::MAX; self.n];
        let mut orig = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_id[v] = orig.len();
                orig.push(v);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        (Graph::new(orig.len(), edges).expect("induced subgraph is well formed"), orig)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subdivision {
    pub vertex: Vertex,
    pub first: EdgeId,
    pub second: EdgeId,
}

#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Graph,
    /// Contracted vertex of each original vertex.
    pub vertex_map: Vec<Vertex>,
    /// New id of each surviving edge; `None` for contracted edges.
    pub edge_map: Vec<Option<EdgeId>>,
}

/// Characteristic vector of a set of edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset(Vec<bool>);

/// Serialized as the sorted list of edge ids.
impl serde::Serialize for EdgeSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.ids())
    }
}

impl EdgeSubset {
    pub fn empty(m: usize) -> Self {
        EdgeSubset(vec![false; m])
    }

    pub fn full(m: usize) -> Self {
        EdgeSubset(vec![true; m])
    }

    pub fn from_ids(m: usize, ids: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut s = Self::empty(m);
        for e in ids {
            if e >= m {
                return Err(Error::EdgeOutOfRange { edge: e, m });
            }
            s.0[e] = true;
        }
        Ok(s)
    }

    pub fn from_mask(m: usize, mask: u64) -> Self {
        EdgeSubset((0..m).map(|e| mask >> e & 1 == 1).collect())
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        EdgeSubset(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.get(e).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.0[e] = true;
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.0[e] = false;
    }

    pub fn toggle(&mut self, e: EdgeId) {
        self.0[e] = !self.0[e];
    }

    pub fn ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.0
    }

    pub fn symmetric_difference(&self, other: &EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    pub fn complement(&self) -> EdgeSubset {
        EdgeSubset(self.0.iter().map(|b| !b).collect())
    }
}

/// Degree of every vertex under some edge set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeVector(pub Vec<i64>);

impl std::ops::Deref for DegreeVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

/// ℓ1 distance between two integer vectors of equal length.
pub fn l1_distance(x: &[i64], y: &[i64]) -> Result<u64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).sum())
}

/// All 2^m edge subsets, in increasing bitmask order.
pub fn enumerate_subsets(g: &Graph) -> Result<impl Iterator<Item = EdgeSubset>> {
    enumerate_subsets_with_limit(g, ENUMERATION_LIMIT)
}

pub fn enumerate_subsets_with_limit(
    g: &Graph,
    limit: usize,
) -> Result<impl Iterator<Item = EdgeSubset>> {
    let m = g.m();
    if m > limit || m >= 64 {
        return Err(Error::EnumerationLimit { edges: m, limit });
    }
    Ok((0..1u64 << m).map(move |mask| EdgeSubset::from_mask(m, mask)))
}

/// Vertices of odd degree in the edge set `f`.
pub fn odd_vertices(g: &Graph, f: &EdgeSubset) -> Result<Vec<Vertex>> {
    let d = g.degree_vector(f)?;
    Ok((0..g.n()).filter(|&v| d[v] % 2 != 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn loop_counts_twice() {
        let g = Graph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(g.degrees().0, vec![2]);
        assert!(g.boundary(&[0]).unwrap().count() == 0);
    }

    #[test]
    fn triangle_degrees() {
        let g = triangle();
        assert_eq!(g.degrees().0, vec![2, 2, 2]);
        let f = EdgeSubset::from_ids(3, [0]).unwrap();
        assert_eq!(g.degree_vector(&f).unwrap().0, vec![1, 1, 0]);
    }

    #[test]
    fn subset_length_checked() {
        let g = triangle();
        let err = g.degree_vector(&EdgeSubset::empty(2)).unwrap_err();
        assert!(matches!(err, Error::SubsetLength { got: 2, expected: 3 }));
    }

    #[test]
    fn out_of_range_vertex() {
        assert!(matches!(
            Graph::new(2, vec![(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn parallel_edges_are_distinct() {
        let g = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.boundary(&[0]).unwrap().count(), 2);
        assert_eq!(g.degrees().0, vec![2, 2]);
    }

    #[test]
    fn subdivision_layout() {
        let g = Graph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        let (s, map) = g.subdivide();
        assert_eq!(s.n(), 4);
        assert_eq!(s.edges(), &[(0, 2), (2, 1), (1, 3), (3, 1)]);
        assert_eq!(map[1], Subdivision { vertex: 3, first: 2, second: 3 });
    }

    #[test]
    fn contraction_keeps_parallel_as_loops() {
        let g = Graph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let c = g.contract_with_map(&EdgeSubset::from_ids(3, [0]).unwrap()).unwrap();
        assert_eq!(c.graph.n(), 2);
        assert_eq!(c.graph.edges(), &[(0, 0), (0, 1)]);
        assert_eq!(c.edge_map, vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn enumeration_cap() {
        let g = Graph::new(2, vec![(0, 1); 21]).unwrap();
        assert!(matches!(enumerate_subsets(&g), Err(Error::EnumerationLimit { .. })));
        assert_eq!(enumerate_subsets(&triangle()).unwrap().count(), 8);
    }

    #[test]
    fn components_and_bipartition() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (3, 4)]).unwrap();
        let all: Vec<_> = (0..5).collect();
        assert_eq!(g.components(&all).unwrap(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(g.bipartition().unwrap(), vec![false, true, false, false, true]);
        assert!(!triangle().is_bipartite());
    }

    #[test]
    fn l1() {
        assert_eq!(l1_distance(&[1, 5], &[3, 2]).unwrap(), 5);
        assert!(l1_distance(&[1], &[1, 2]).is_err());
    }
}
