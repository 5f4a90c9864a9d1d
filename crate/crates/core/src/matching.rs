//! Maximum matchings, Tutte–Berge barriers, König covers and the
//! alternating-path link between two maximum matchings.

use serde::Serialize;

use crate::blossom::{Blossom, NONE};
use crate::error::{internal, Error, Result};
use crate::graph::{EdgeId, EdgeSubset, Graph, Vertex};

/// A set X certifying an upper bound on ν through the Tutte–Berge formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Barrier {
    pub vertices: Vec<Vertex>,
    /// Odd components of G − X.
    pub odd_components: Vec<Vec<Vertex>>,
}

#[derive(Debug, Clone)]
pub struct MaximumMatching {
    pub matching: EdgeSubset,
    pub size: usize,
    pub barrier: Barrier,
}

/// Checks that `m` is a matching of `g` (no loops, no shared endpoints).
pub fn is_matching(g: &Graph, m: &EdgeSubset) -> Result<bool> {
    g.check_subset(m)?;
    let mut covered = vec![false; g.n()];
    for e in m.ids() {
        let (u, v) = g.edges()[e];
        if u == v || covered[u] || covered[v] {
            return Ok(false);
        }
        covered[u] = true;
        covered[v] = true;
    }
    Ok(true)
}

fn simple_adjacency(g: &Graph) -> Vec<Vec<Vertex>> {
    (0..g.n())
        .map(|v| {
            let mut seen = Vec::new();
            for &(_, w) in g.incident(v) {
                if w != v && !seen.contains(&w) {
                    seen.push(w);
                }
            }
            seen
        })
        .collect()
}

/// Lowest edge id joining each matched pair.
fn mate_to_edges(g: &Graph, mate: &[usize]) -> EdgeSubset {
    let mut m = EdgeSubset::empty(g.m());
    let mut done = vec![false; g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u != v && mate[u] == v && !done[u] {
            m.insert(e);
            done[u] = true;
            done[v] = true;
        }
    }
    m
}

fn mate_from_edges(g: &Graph, m: &EdgeSubset) -> Vec<usize> {
    let mut mate = vec![NONE; g.n()];
    for e in m.ids() {
        let (u, v) = g.edges()[e];
        mate[u] = v;
        mate[v] = u;
    }
    mate
}

/// Gallai–Edmonds labels for a maximum matching `m` (given as mates):
/// `even` vertices are reachable from a free vertex by an even alternating
/// path; `odd` ones are their neighbours across non-matching edges.
pub(crate) fn gallai_edmonds(g: &Graph, mate: &[usize]) -> Result<(Vec<bool>, Vec<bool>)> {
    let mut b = Blossom::new(simple_adjacency(g));
    b.mate = mate.to_vec();
    let roots: Vec<Vertex> = (0..g.n()).filter(|&v| mate[v] == NONE).collect();
    if roots.is_empty() {
        return Ok((vec![false; g.n()], vec![false; g.n()]));
    }
    let labels = b.label(&roots).map_err(|_| internal("labelling found an augmenting path"))?;
    Ok((labels.even, labels.odd))
}

fn odd_components_without(g: &Graph, x: &[bool]) -> Vec<Vec<Vertex>> {
    let keep: Vec<bool> = x.iter().map(|b| !b).collect();
    g.components_masked(&keep, |_| true).into_iter().filter(|c| c.len() % 2 == 1).collect()
}

/// Maximum matching by Edmonds' algorithm, with the barrier read off the
/// final search forest: the odd-labelled vertices.
pub fn maximum_matching(g: &Graph) -> Result<MaximumMatching> {
    let mut b = Blossom::new(simple_adjacency(g));
    b.greedy();
    b.maximize();
    let matching = mate_to_edges(g, &b.mate);
    let size = matching.count();
    let (_, odd) = gallai_edmonds(g, &b.mate)?;
    let vertices: Vec<Vertex> = (0..g.n()).filter(|&v| odd[v]).collect();
    let odd_components = odd_components_without(g, &odd);
    let barrier = Barrier { vertices, odd_components };
    if g.n() + barrier.vertices.len() - barrier.odd_components.len() != 2 * size {
        return Err(internal("barrier does not certify the matching"));
    }
    Ok(MaximumMatching { matching, size, barrier })
}

pub fn matching_number(g: &Graph) -> usize {
    let mut b = Blossom::new(simple_adjacency(g));
    b.greedy();
    b.maximize();
    b.mate.iter().filter(|&&m| m != NONE).count() / 2
}

/// True iff `m` is a matching and `x` attains equality in the Tutte–Berge
/// formula |V| − 2|M| = odd(G − X) − |X|.
pub fn verify_barrier(g: &Graph, m: &EdgeSubset, x: &[Vertex]) -> Result<bool> {
    if !is_matching(g, m)? {
        return Ok(false);
    }
    let mut inside = vec![false; g.n()];
    for &v in x {
        g.check_vertex(v)?;
        inside[v] = true;
    }
    let odd = odd_components_without(g, &inside).len() as i64;
    let k = inside.iter().filter(|&&b| b).count() as i64;
    Ok(g.n() as i64 - 2 * m.count() as i64 == odd - k)
}

/// Outcome of [`alternating_link`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Link {
    /// An even path from `u` to `v` alternating between M_v and M_u.
    Path(Vec<EdgeId>),
    /// Deleting this endpoint decreases ν.
    DropsAt(Vertex),
}

fn without_vertex(g: &Graph, x: Vertex) -> Graph {
    let keep: Vec<bool> = (0..g.n()).map(|v| v != x).collect();
    g.induced(&keep).0
}

/// For an edge `uv` and maximum matchings `mu` of G − u and `mv` of G − v:
/// either one of the deletions drops ν, or the component of `u` in
/// M_u ∪ M_v is an even alternating path ending at `v`.
pub fn alternating_link(
    g: &Graph,
    mu: &EdgeSubset,
    mv: &EdgeSubset,
    u: Vertex,
    v: Vertex,
) -> Result<Link> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v || !g.incident(u).iter().any(|&(_, w)| w == v) {
        return Err(Error::NotAdjacent { u, v });
    }
    if !is_matching(g, mu)? || !is_matching(g, mv)? {
        return Err(Error::NotAMatching);
    }
    let mate_u = mate_from_edges(g, mu);
    let mate_v = mate_from_edges(g, mv);
    if mate_u[u] != NONE || mate_v[v] != NONE {
        return Err(Error::NotAMatching);
    }
    let short = Error::NotMaximum { augmenting_path: Vec::new() };
    if mu.count() != matching_number(&without_vertex(g, u))
        || mv.count() != matching_number(&without_vertex(g, v))
    {
        return Err(short);
    }
    let nu = matching_number(g);
    if mu.count() < nu {
        return Ok(Link::DropsAt(u));
    }
    if mv.count() < nu {
        return Ok(Link::DropsAt(v));
    }
    let mut path = Vec::new();
    let mut at = u;
    let mut use_v = true;
    loop {
        let (m, mate) = if use_v { (mv, &mate_v) } else { (mu, &mate_u) };
        if mate[at] == NONE {
            break;
        }
        let w = mate[at];
        let e = g
            .incident(at)
            .iter()
            .find(|&&(e, y)| y == w && m.contains(e))
            .map(|&(e, _)| e)
            .ok_or_else(|| internal("matched pair without an edge"))?;
        path.push(e);
        at = w;
        use_v = !use_v;
    }
    if at != v || path.len() % 2 != 0 {
        return Err(internal("alternating path does not end at v"));
    }
    Ok(Link::Path(path))
}

/// Minimum vertex cover of a bipartite graph, of size ν (König).
pub fn konig_cover(g: &Graph) -> Result<Vec<Vertex>> {
    let side = g.bipartition().ok_or(Error::NotBipartite)?;
    let mm = maximum_matching(g)?;
    let mate = mate_from_edges(g, &mm.matching);
    // Alternating reachability from free left vertices.
    let mut reach = vec![false; g.n()];
    let mut stack: Vec<Vertex> = (0..g.n()).filter(|&v| !side[v] && mate[v] == NONE).collect();
    for &v in &stack {
        reach[v] = true;
    }
    while let Some(x) = stack.pop() {
        for &(_, y) in g.incident(x) {
            if reach[y] {
                continue;
            }
            // Non-matching edges leave the left side, matching edges the right.
            if side[x] == (mate[x] == y) {
                reach[y] = true;
                stack.push(y);
            }
        }
    }
    let cover: Vec<Vertex> = (0..g.n())
        .filter(|&v| (!side[v] && !reach[v]) || (side[v] && reach[v]))
        .collect();
    if cover.len() != mm.size || !is_cover(g, &cover) {
        return Err(internal("König cover is not tight"));
    }
    Ok(cover)
}

pub fn is_cover(g: &Graph, cover: &[Vertex]) -> bool {
    let mut c = vec![false; g.n()];
    for &v in cover {
        if v < g.n() {
            c[v] = true;
        }
    }
    g.edges().iter().all(|&(u, v)| c[u] || c[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn triangle() {
        let t = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let mm = maximum_matching(&t).unwrap();
        assert_eq!(mm.size, 1);
        assert!(mm.barrier.vertices.is_empty());
        assert!(verify_barrier(&t, &mm.matching, &[]).unwrap());
    }

    #[test]
    fn star_barrier_is_center() {
        let s = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let mm = maximum_matching(&s).unwrap();
        assert_eq!(mm.size, 1);
        assert_eq!(mm.barrier.vertices, vec![0]);
        assert_eq!(mm.barrier.odd_components.len(), 3);
    }

    #[test]
    fn loops_and_parallels_ignored() {
        let h = g(2, &[(0, 0), (0, 1), (0, 1)]);
        let mm = maximum_matching(&h).unwrap();
        assert_eq!(mm.size, 1);
        assert!(mm.matching.contains(1));
    }

    #[test]
    fn empty_graph() {
        let e = g(0, &[]);
        assert_eq!(maximum_matching(&e).unwrap().size, 0);
    }

    #[test]
    fn konig_on_c4_and_p3() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(konig_cover(&c4).unwrap().len(), 2);
        let p3 = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(konig_cover(&p3).unwrap(), vec![1]);
        assert!(matches!(konig_cover(&g(3, &[(0, 1), (1, 2), (2, 0)])), Err(Error::NotBipartite)));
    }

    #[test]
    fn link_drops_on_a_path() {
        let p = g(3, &[(0, 1), (1, 2)]);
        let ma = EdgeSubset::from_ids(2, [1]).unwrap();
        let mb = EdgeSubset::empty(2);
        assert_eq!(alternating_link(&p, &ma, &mb, 0, 1).unwrap(), Link::DropsAt(1));
    }

    #[test]
    fn link_in_c4_drops() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let mu = EdgeSubset::from_ids(4, [1]).unwrap();
        let mv = EdgeSubset::from_ids(4, [2]).unwrap();
        assert!(matches!(alternating_link(&c4, &mu, &mv, 0, 1).unwrap(), Link::DropsAt(_)));
    }

    #[test]
    fn link_in_c5_is_even_path() {
        let c5 = g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        // M_0 = {12, 34}, M_1 = {23, 40}
        let mu = EdgeSubset::from_ids(5, [1, 3]).unwrap();
        let mv = EdgeSubset::from_ids(5, [2, 4]).unwrap();
        assert_eq!(alternating_link(&c5, &mu, &mv, 0, 1).unwrap(), Link::Path(vec![4, 3, 2, 1]));
    }
}
