//! Bidirected graphs: reachability of signed vertices from x0⁻ with
//! bidirected-cut certificates, and the classical (l, u, Π)-factor solver
//! built on improving paths in an auxiliary bidirected graph.

mod factor;
mod gadget;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{internal, Error, Result};
use crate::graph::{EdgeId, Vertex};

pub use factor::{
    build_auxiliary, build_search_graph, classical_deficiency, classical_deficiency_from, factor_cut,
    orientation_deficiency, verify_factor_cut, AuxOrigin, Auxiliary, ClassicalSolution, FactorCut,
    Orientation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// The edge a^α b^β, whose vector is α·e_a + β·e_b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiEdge {
    pub u: Vertex,
    pub su: Sign,
    pub v: Vertex,
    pub sv: Sign,
}

impl BiEdge {
    pub fn new(u: Vertex, su: Sign, v: Vertex, sv: Sign) -> Self {
        BiEdge { u, su, v, sv }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The two ends as (vertex, sign).
    pub fn ends(&self) -> [(Vertex, Sign); 2] {
        [(self.u, self.su), (self.v, self.sv)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidirectedGraph {
    n: usize,
    edges: Vec<BiEdge>,
}

impl BidirectedGraph {
    pub fn new(n: usize, edges: Vec<BiEdge>) -> Result<Self> {
        for e in &edges {
            for w in [e.u, e.v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        Ok(BidirectedGraph { n, edges })
    }

    /// Each arc u → v becomes u⁻v⁺.
    pub fn from_digraph(n: usize, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        let edges = arcs.iter().map(|&(u, v)| BiEdge::new(u, Sign::Minus, v, Sign::Plus)).collect();
        BidirectedGraph::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[BiEdge] {
        &self.edges
    }

    pub fn path_sum(&self, path: &[EdgeId]) -> Result<Vec<i64>> {
        let mut s = vec![0i64; self.n];
        for &e in path {
            let edge = self.edges.get(e).ok_or(Error::EdgeOutOfRange { edge: e, m: self.m() })?;
            s[edge.u] += edge.su.value();
            s[edge.v] += edge.sv.value();
        }
        Ok(s)
    }
}

/// True iff `s` is the vector of some a^α b^β (including the zero vector,
/// the sum of a^α a^{−α}).
pub fn is_path_sum(s: &[i64]) -> bool {
    let l1: i64 = s.iter().map(|x| x.abs()).sum();
    l1 == 0 || l1 == 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub vertex: Vertex,
    pub sign: Sign,
    /// Edges of an (x0⁻, vertex^sign) path, ordered as a trail.
    pub path: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachabilityResult {
    pub x0: Vertex,
    pub plus: Vec<Vertex>,
    pub minus: Vec<Vertex>,
    pub witnesses: Vec<Witness>,
}

impl ReachabilityResult {
    pub fn in_plus(&self, v: Vertex) -> bool {
        self.plus.binary_search(&v).is_ok()
    }

    pub fn in_minus(&self, v: Vertex) -> bool {
        self.minus.binary_search(&v).is_ok()
    }

    pub fn witness(&self, v: Vertex, sign: Sign) -> Option<&[EdgeId]> {
        self.witnesses.iter().find(|w| w.vertex == v && w.sign == sign).map(|w| w.path.as_slice())
    }
}

/// Target vector x0⁻ + v^β.
pub(crate) fn target(n: usize, x0: Vertex, v: Vertex, beta: Sign) -> Vec<i64> {
    let mut t = vec![0; n];
    t[x0] -= 1;
    t[v] += beta.value();
    t
}

/// V⁺, V⁻ and one witness path per reached signed vertex. The result is
/// checked against the bidirected-cut conditions before it is returned.
pub fn reachable_sets(bg: &BidirectedGraph, x0: Vertex) -> Result<ReachabilityResult> {
    if x0 >= bg.n() {
        return Err(Error::VertexOutOfRange { vertex: x0, n: bg.n() });
    }
    let engine = gadget::Reach::new(bg, x0);
    let (plus, minus) = engine.labels()?;
    let mut witnesses = Vec::new();
    let mut ps = Vec::new();
    let mut ms = Vec::new();
    for v in 0..bg.n() {
        for (sign, reached) in [(Sign::Plus, plus[v]), (Sign::Minus, minus[v])] {
            if !reached {
                continue;
            }
            let path = engine.witness(v, sign)?;
            if bg.path_sum(&path)? != target(bg.n(), x0, v, sign) {
                return Err(internal("witness has the wrong sum"));
            }
            witnesses.push(Witness { vertex: v, sign, path });
        }
        if plus[v] {
            ps.push(v);
        }
        if minus[v] {
            ms.push(v);
        }
    }
    if !verify_bidirected_cut(bg, x0, &ps, &ms) {
        return Err(internal("reachable sets violate the bidirected cut conditions"));
    }
    Ok(ReachabilityResult { x0, plus: ps, minus: ms, witnesses })
}

/// V⁺ and V⁻ as masks, without witnesses.
pub(crate) fn reachable_masks(bg: &BidirectedGraph, x0: Vertex) -> Result<(Vec<bool>, Vec<bool>)> {
    gadget::Reach::new(bg, x0).labels()
}

/// One (x0⁻, v^β) path, or `None` if not reachable.
pub(crate) fn find_path(bg: &BidirectedGraph, x0: Vertex, v: Vertex, beta: Sign) -> Result<Vec<EdgeId>> {
    gadget::Reach::new(bg, x0).witness(v, beta)
}

/// Checks that (X⁺, X⁻) is a bidirected cut for x0: no useful edge inside
/// X⁺ Δ X⁻, and every component of the rest is either untouched with no
/// useful boundary edge, or inside X⁺ ∩ X⁻ with exactly one useful boundary
/// edge (none when it contains x0).
pub fn verify_bidirected_cut(bg: &BidirectedGraph, x0: Vertex, xp: &[Vertex], xm: &[Vertex]) -> bool {
    let n = bg.n();
    if x0 >= n || xp.iter().chain(xm).any(|&v| v >= n) {
        return false;
    }
    let mut p = vec![false; n];
    let mut m = vec![false; n];
    for &v in xp {
        p[v] = true;
    }
    for &v in xm {
        m[v] = true;
    }
    if !p[x0] {
        return false;
    }
    let useful_at = |x: Vertex, s: Sign| match s {
        Sign::Minus => p[x],
        Sign::Plus => m[x],
    };
    let in_a: Vec<bool> = (0..n).map(|v| p[v] != m[v]).collect();
    for e in bg.edges() {
        if in_a[e.u] && in_a[e.v] && useful_at(e.u, e.su) && useful_at(e.v, e.sv) {
            return false;
        }
    }
    // components of the underlying graph minus A
    let mut comp = vec![usize::MAX; n];
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for e in bg.edges() {
        if !in_a[e.u] && !in_a[e.v] && e.u != e.v {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
    }
    let mut members: Vec<Vec<Vertex>> = Vec::new();
    for s in 0..n {
        if in_a[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut list = Vec::new();
        while let Some(x) = stack.pop() {
            list.push(x);
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.push(list);
    }
    let mut useful_boundary = vec![0usize; members.len()];
    for e in bg.edges() {
        for (inner, outer) in [((e.u, e.su), (e.v, e.sv)), ((e.v, e.sv), (e.u, e.su))] {
            if !in_a[inner.0] && in_a[outer.0] && useful_at(outer.0, outer.1) {
                useful_boundary[comp[inner.0]] += 1;
            }
        }
    }
    members.iter().enumerate().all(|(id, c)| {
        let untouched = c.iter().all(|&v| !p[v] && !m[v]);
        let inside = c.iter().all(|&v| p[v] && m[v]);
        let has_x0 = c.contains(&x0);
        (untouched && useful_boundary[id] == 0)
            || (inside && useful_boundary[id] == if has_x0 { 0 } else { 1 })
    })
}

/// Orders the edges of `s` (whose sum is x0⁻ v^β) as a single signed trail
/// from x0; closed sub-trails are dropped. Returns the trail edges.
pub(crate) fn open_chain(bg: &BidirectedGraph, x0: Vertex, s: &[EdgeId]) -> Result<Vec<EdgeId>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    // half-edge h = 2·idx + end, idx into s
    let mut by_vertex: BTreeMap<Vertex, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    let end_of = |h: usize| bg.edges()[s[h / 2]].ends()[h % 2];
    for h in 0..2 * s.len() {
        let (v, sign) = end_of(h);
        let slot = by_vertex.entry(v).or_default();
        match sign {
            Sign::Plus => slot.0.push(h),
            Sign::Minus => slot.1.push(h),
        }
    }
    let mut partner = vec![usize::MAX; 2 * s.len()];
    let mut start = None;
    for (&v, (plus, minus)) in &by_vertex {
        for (a, b) in plus.iter().zip(minus) {
            partner[*a] = *b;
            partner[*b] = *a;
        }
        if v == x0 && minus.len() > plus.len() {
            start = Some(minus[plus.len()]);
        }
    }
    let Some(mut h) = start else {
        return Err(internal("no free x0⁻ end in witness set"));
    };
    let mut chain = Vec::new();
    loop {
        chain.push(s[h / 2]);
        let other = h ^ 1;
        if partner[other] == usize::MAX {
            break;
        }
        h = partner[other];
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::*;

    #[test]
    fn single_arc() {
        let bg = BidirectedGraph::new(2, vec![BiEdge::new(0, Minus, 1, Plus)]).unwrap();
        let r = reachable_sets(&bg, 0).unwrap();
        assert_eq!(r.plus, vec![0, 1]);
        assert!(r.minus.is_empty());
        assert_eq!(r.witness(1, Plus).unwrap(), &[0]);
    }

    #[test]
    fn isolated_root() {
        let bg = BidirectedGraph::new(1, vec![]).unwrap();
        let r = reachable_sets(&bg, 0).unwrap();
        assert_eq!(r.plus, vec![0]);
        assert!(r.minus.is_empty());
        assert!(verify_bidirected_cut(&bg, 0, &[0], &[]));
    }

    #[test]
    fn double_minus_reaches_minus() {
        let bg = BidirectedGraph::new(2, vec![BiEdge::new(0, Minus, 1, Minus)]).unwrap();
        let r = reachable_sets(&bg, 0).unwrap();
        assert_eq!(r.minus, vec![1]);
        assert_eq!(r.plus, vec![0]);
    }

    #[test]
    fn full_sets_fail_on_two_isolated_vertices() {
        let bg = BidirectedGraph::new(2, vec![]).unwrap();
        assert!(!verify_bidirected_cut(&bg, 0, &[0, 1], &[0, 1]));
    }

    #[test]
    fn path_sums() {
        let bg = BidirectedGraph::new(
            3,
            vec![BiEdge::new(0, Minus, 1, Plus), BiEdge::new(1, Minus, 2, Plus), BiEdge::new(2, Plus, 2, Plus)],
        )
        .unwrap();
        assert_eq!(bg.path_sum(&[0, 1]).unwrap(), vec![-1, 0, 1]);
        assert_eq!(bg.path_sum(&[]).unwrap(), vec![0, 0, 0]);
        assert_eq!(bg.path_sum(&[2]).unwrap(), vec![0, 0, 2]);
    }

    #[test]
    fn odd_cycle_reaches_both_signs() {
        // x0⁻a⁺, a⁻b⁻, b⁺c⁺, c⁻a⁻ : blossom-like structure
        let e = vec![
            BiEdge::new(0, Minus, 1, Plus),
            BiEdge::new(1, Minus, 2, Minus),
            BiEdge::new(2, Plus, 3, Plus),
            BiEdge::new(3, Minus, 1, Minus),
        ];
        let bg = BidirectedGraph::new(4, e).unwrap();
        let r = reachable_sets(&bg, 0).unwrap();
        assert!(r.in_plus(1) && r.in_minus(2) && r.in_plus(3));
        for w in &r.witnesses {
            let sum = bg.path_sum(&w.path).unwrap();
            assert_eq!(sum, target(4, 0, w.vertex, w.sign));
        }
    }
}
