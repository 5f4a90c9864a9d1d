//! Classical (l, u, Π)-factors: auxiliary bidirected graphs, improving
//! rounds, Tutte-type cut certificates and degree-constrained orientations.

use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::graph::{EdgeId, EdgeSubset, Graph, Vertex};
use crate::sponge::ClassicalSpec;

use super::{find_path, reachable_masks, BiEdge, BidirectedGraph, Sign};

/// What an edge of the auxiliary graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuxOrigin {
    /// A graph edge.
    Edge(EdgeId),
    /// An edge joining x0 to a vertex with a deficit.
    Root(Vertex),
    /// A parity loop at a vertex.
    Loop(Vertex),
}

#[derive(Debug, Clone)]
pub struct Auxiliary {
    pub graph: BidirectedGraph,
    /// The added vertex; always `n`.
    pub x0: Vertex,
    pub origin: Vec<AuxOrigin>,
}

struct AuxBuilder {
    edges: Vec<BiEdge>,
    origin: Vec<AuxOrigin>,
}

impl AuxBuilder {
    fn push(&mut self, e: BiEdge, o: AuxOrigin) {
        self.edges.push(e);
        self.origin.push(o);
    }
}

fn check_spec(g: &Graph, spec: &ClassicalSpec) -> Result<()> {
    if spec.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: spec.n() });
    }
    Ok(())
}

fn graph_part(g: &Graph, f: &EdgeSubset) -> AuxBuilder {
    let mut b = AuxBuilder { edges: Vec::new(), origin: Vec::new() };
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        let s = if f.contains(e) { Sign::Minus } else { Sign::Plus };
        b.push(BiEdge::new(x, s, y, s), AuxOrigin::Edge(e));
    }
    b
}

fn finish(g: &Graph, b: AuxBuilder) -> Auxiliary {
    let graph = BidirectedGraph::new(g.n() + 1, b.edges).expect("auxiliary graph is well formed");
    Auxiliary { graph, x0: g.n(), origin: b.origin }
}

/// The textbook auxiliary graph G_F: x⁻y⁻ for F-edges, x⁺y⁺ for the
/// others, one x0-edge per vertex below or above its bounds, both x0-edges
/// for parity vertices of wrong parity strictly inside, and loops for
/// parity vertices of correct parity.
pub fn build_auxiliary(g: &Graph, f: &EdgeSubset, spec: &ClassicalSpec) -> Result<Auxiliary> {
    check_spec(g, spec)?;
    let d = g.degree_vector(f)?;
    let x0 = g.n();
    let mut b = graph_part(g, f);
    for x in 0..g.n() {
        let (l, u, dx) = (spec.l[x], spec.u[x], d[x]);
        let root = |s| BiEdge::new(x0, Sign::Minus, x, s);
        if dx < l {
            b.push(root(Sign::Minus), AuxOrigin::Root(x));
        }
        if dx > u {
            b.push(root(Sign::Plus), AuxOrigin::Root(x));
        }
        if spec.parity[x] {
            let right = (dx - l) % 2 == 0;
            if l < dx && dx < u && !right {
                b.push(root(Sign::Plus), AuxOrigin::Root(x));
                b.push(root(Sign::Minus), AuxOrigin::Root(x));
            }
            if l < dx && dx <= u && right {
                b.push(BiEdge::new(x, Sign::Plus, x, Sign::Plus), AuxOrigin::Loop(x));
            }
            if l <= dx && dx < u && right {
                b.push(BiEdge::new(x, Sign::Minus, x, Sign::Minus), AuxOrigin::Loop(x));
            }
        }
    }
    Ok(finish(g, b))
}

/// The auxiliary graph used by the solver. It differs from
/// [`build_auxiliary`] in two places, both needed for the improving-path
/// criterion to be exact:
///   * a vertex at distance k below l (above u) gets k parallel x0-edges,
///     so that a single path may repair two units at one vertex;
///   * a parity vertex of wrong parity strictly inside its bounds gets the
///     edge x0⁻x⁻ and the loop x⁺x⁺ instead of both x0-edges, which would
///     otherwise form a spurious (x0⁻, x0⁻) path by themselves.
pub fn build_search_graph(g: &Graph, f: &EdgeSubset, spec: &ClassicalSpec) -> Result<Auxiliary> {
    check_spec(g, spec)?;
    let d = g.degree_vector(f)?;
    let x0 = g.n();
    let mut b = graph_part(g, f);
    for x in 0..g.n() {
        let (l, u, dx) = (spec.l[x], spec.u[x], d[x]);
        let root = |s| BiEdge::new(x0, Sign::Minus, x, s);
        for _ in dx..l {
            b.push(root(Sign::Minus), AuxOrigin::Root(x));
        }
        for _ in u..dx {
            b.push(root(Sign::Plus), AuxOrigin::Root(x));
        }
        if spec.parity[x] {
            let right = (dx - l) % 2 == 0;
            if l < dx && dx < u && !right {
                b.push(root(Sign::Minus), AuxOrigin::Root(x));
                b.push(BiEdge::new(x, Sign::Plus, x, Sign::Plus), AuxOrigin::Loop(x));
            }
            if l < dx && dx <= u && right {
                b.push(BiEdge::new(x, Sign::Plus, x, Sign::Plus), AuxOrigin::Loop(x));
            }
            if l <= dx && dx < u && right {
                b.push(BiEdge::new(x, Sign::Minus, x, Sign::Minus), AuxOrigin::Loop(x));
            }
        }
    }
    Ok(finish(g, b))
}

/// Certificate (L, U) for the Tutte-type factor condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorCut {
    #[serde(rename = "L")]
    pub lower: Vec<Vertex>,
    #[serde(rename = "U")]
    pub upper: Vec<Vertex>,
    pub odd_components: Vec<Vec<Vertex>>,
    pub violation: i64,
}

/// Recomputes the odd components and the violation
/// l(L) + d(L,U) + ω(L,U) − u(U) − Σ_{x∈L} d(x).
pub fn factor_cut(g: &Graph, spec: &ClassicalSpec, lower: &[Vertex], upper: &[Vertex]) -> Result<FactorCut> {
    check_spec(g, spec)?;
    let n = g.n();
    let mut in_l = vec![false; n];
    let mut in_u = vec![false; n];
    for &v in lower {
        g.check_vertex(v)?;
        in_l[v] = true;
    }
    for &v in upper {
        g.check_vertex(v)?;
        if in_l[v] {
            return Err(Error::Overlap(v));
        }
        in_u[v] = true;
    }
    let deg = g.degrees();
    let rest: Vec<bool> = (0..n).map(|v| !in_l[v] && !in_u[v]).collect();
    let mut odd_components = Vec::new();
    for c in g.components_masked(&rest, |_| true) {
        if !c.iter().all(|&v| spec.parity[v]) {
            continue;
        }
        let mut in_c = vec![false; n];
        for &v in &c {
            in_c[v] = true;
        }
        let lc: i64 = c.iter().map(|&v| spec.l[v]).sum();
        if (lc + g.edges_between(&in_c, &in_l)) % 2 != 0 {
            odd_components.push(c);
        }
    }
    let mut lower: Vec<Vertex> = (0..n).filter(|&v| in_l[v]).collect();
    let mut upper: Vec<Vertex> = (0..n).filter(|&v| in_u[v]).collect();
    lower.dedup();
    upper.dedup();
    let violation = lower.iter().map(|&v| spec.l[v] - deg[v]).sum::<i64>()
        + g.edges_between(&in_l, &in_u)
        + odd_components.len() as i64
        - upper.iter().map(|&v| spec.u[v]).sum::<i64>();
    Ok(FactorCut { lower, upper, odd_components, violation })
}

pub fn verify_factor_cut(g: &Graph, spec: &ClassicalSpec, lower: &[Vertex], upper: &[Vertex]) -> Result<i64> {
    Ok(factor_cut(g, spec, lower, upper)?.violation)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalSolution {
    pub factor: EdgeSubset,
    pub deficiency: u64,
    pub cut: FactorCut,
    /// Number of improving paths applied.
    pub rounds: usize,
}

/// Minimum-deficiency (l, u, Π)-factor starting from F = ∅.
pub fn classical_deficiency(g: &Graph, spec: &ClassicalSpec) -> Result<ClassicalSolution> {
    classical_deficiency_from(g, spec, &EdgeSubset::empty(g.m()))
}

/// Improving rounds from the given start. Each round looks, in this order,
/// for an (x0⁻, x0⁻) path, an (x0⁻, x⁺) path with x ∉ Π and d_F(x) < u(x),
/// or an (x0⁻, x⁻) path with x ∉ Π and d_F(x) > l(x), and flips the graph
/// edges of the path. When none exists the reachable sets give the cut
/// U = V⁺ \ V⁻, L = V⁻ \ V⁺ (x0 excluded), whose violation equals the
/// deficiency.
pub fn classical_deficiency_from(g: &Graph, spec: &ClassicalSpec, start: &EdgeSubset) -> Result<ClassicalSolution> {
    check_spec(g, spec)?;
    g.check_subset(start)?;
    let n = g.n();
    let mut f = start.clone();
    let mut def = spec.deficiency(&g.degree_vector(&f)?)?;
    let mut rounds = 0;
    loop {
        let aux = build_search_graph(g, &f, spec)?;
        let x0 = aux.x0;
        let d = g.degree_vector(&f)?;
        let (plus, minus) = reachable_masks(&aux.graph, x0)?;
        let target = if minus[x0] {
            Some((x0, Sign::Minus))
        } else if let Some(x) = (0..n).find(|&x| !spec.parity[x] && plus[x] && d[x] < spec.u[x]) {
            Some((x, Sign::Plus))
        } else {
            (0..n).find(|&x| !spec.parity[x] && minus[x] && d[x] > spec.l[x]).map(|x| (x, Sign::Minus))
        };
        let Some((v, sign)) = target else {
            let upper: Vec<Vertex> = (0..n).filter(|&v| plus[v] && !minus[v]).collect();
            let lower: Vec<Vertex> = (0..n).filter(|&v| minus[v] && !plus[v]).collect();
            let cut = trim_cut(g, spec, lower, upper, def as i64)?;
            return Ok(ClassicalSolution { factor: f, deficiency: def, cut, rounds });
        };
        let path = find_path(&aux.graph, x0, v, sign)?;
        for e in path {
            if let AuxOrigin::Edge(ge) = aux.origin[e] {
                f.toggle(ge);
            }
        }
        let next = spec.deficiency(&g.degree_vector(&f)?)?;
        if next >= def {
            return Err(internal("improving path did not improve"));
        }
        def = next;
        rounds += 1;
    }
}

/// Checks the cut is tight and drops vertices that do not change its value.
fn trim_cut(g: &Graph, spec: &ClassicalSpec, mut lower: Vec<Vertex>, mut upper: Vec<Vertex>, want: i64) -> Result<FactorCut> {
    let cut = factor_cut(g, spec, &lower, &upper)?;
    if cut.violation != want {
        return Err(internal(format!(
            "cut violation {} differs from deficiency {}",
            cut.violation, want
        )));
    }
    for pick_lower in [true, false] {
        let mut i = 0;
        loop {
            let list = if pick_lower { &lower } else { &upper };
            if i >= list.len() {
                break;
            }
            let mut l2 = lower.clone();
            let mut u2 = upper.clone();
            if pick_lower {
                l2.remove(i);
            } else {
                u2.remove(i);
            }
            if factor_cut(g, spec, &l2, &u2)?.violation == want {
                lower = l2;
                upper = u2;
            } else {
                i += 1;
            }
        }
    }
    factor_cut(g, spec, &lower, &upper)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// (tail, head) for every edge, in edge order.
    pub arcs: Vec<(Vertex, Vertex)>,
    pub indegree: Vec<i64>,
    pub deficiency: u64,
    /// Certificate on the subdivided graph.
    pub cut: FactorCut,
}

/// Orientation minimizing the indegree deficiency: subdivide each edge,
/// require degree one at each subdivision vertex, and orient every edge
/// towards the endpoint whose half is in the factor.
pub fn orientation_deficiency(g: &Graph, spec: &ClassicalSpec) -> Result<Orientation> {
    check_spec(g, spec)?;
    let (s, map) = g.subdivide();
    let mut l = spec.l.clone();
    let mut u = spec.u.clone();
    let mut parity = spec.parity.clone();
    for _ in 0..g.m() {
        l.push(1);
        u.push(1);
        parity.push(true);
    }
    let ext = ClassicalSpec::new(l, u, parity)?;
    let sol = classical_deficiency(&s, &ext)?;
    let mut f = sol.factor;
    // Give each subdivision vertex degree exactly one; this never raises the
    // deficiency, so the factor stays optimal.
    for sub in &map {
        let (a, b) = (sub.first, sub.second);
        let ends = [s.edges()[a].0, s.edges()[b].1];
        let both = f.contains(a) && f.contains(b);
        let none = !f.contains(a) && !f.contains(b);
        if !both && !none {
            continue;
        }
        let d = s.degree_vector(&f)?;
        let delta = |v: Vertex, k: i64| ext.dist(v, d[v] + k) as i64 - ext.dist(v, d[v]) as i64;
        let step = if both { -1 } else { 1 };
        let (da, db) = (delta(ends[0], step), delta(ends[1], step));
        let pick = if ends[0] == ends[1] || da <= db { a } else { b };
        f.toggle(pick);
    }
    let mut arcs = Vec::with_capacity(g.m());
    let mut indegree = vec![0i64; g.n()];
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        let (tail, head) = if f.contains(map[e].second) { (x, y) } else { (y, x) };
        arcs.push((tail, head));
        indegree[head] += 1;
    }
    let deficiency = spec.deficiency(&indegree)?;
    if deficiency != sol.deficiency {
        return Err(internal("orientation lost optimality"));
    }
    Ok(Orientation { arcs, indegree, deficiency, cut: sol.cut })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn k2_auxiliary() {
        let k2 = g(2, &[(0, 1)]);
        let aux = build_auxiliary(&k2, &EdgeSubset::empty(1), &ClassicalSpec::perfect_matching(2)).unwrap();
        let e = aux.graph.edges();
        assert!(e.contains(&BiEdge::new(2, Sign::Minus, 0, Sign::Minus)));
        assert!(e.contains(&BiEdge::new(2, Sign::Minus, 1, Sign::Minus)));
        assert!(e.contains(&BiEdge::new(0, Sign::Plus, 1, Sign::Plus)));
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn c4_auxiliary_one_edge() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let f = EdgeSubset::from_ids(4, [0]).unwrap();
        let aux = build_auxiliary(&c4, &f, &ClassicalSpec::perfect_matching(4)).unwrap();
        let roots = aux.origin.iter().filter(|o| matches!(o, AuxOrigin::Root(_))).count();
        assert_eq!(roots, 2);
    }

    #[test]
    fn star_certificate() {
        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let sol = classical_deficiency(&star, &ClassicalSpec::perfect_matching(4)).unwrap();
        assert_eq!(sol.deficiency, 2);
        assert_eq!(sol.cut.violation, 2);
        assert_eq!(sol.cut.upper, vec![0]);
        assert!(sol.cut.lower.is_empty());
    }

    #[test]
    fn k4_perfect() {
        let e = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let sol = classical_deficiency(&g(4, &e), &ClassicalSpec::perfect_matching(4)).unwrap();
        assert_eq!(sol.deficiency, 0);
        assert_eq!(sol.cut.violation, 0);
    }

    #[test]
    fn parallel_edges_with_environment_bounds() {
        let h = g(2, &[(0, 1); 9]);
        let spec = ClassicalSpec::new(vec![1, 2], vec![9, 8], vec![true, true]).unwrap();
        let sol = classical_deficiency(&h, &spec).unwrap();
        assert_eq!(sol.deficiency, 1);
        assert_eq!(sol.cut.violation, 1);
    }

    #[test]
    fn verbatim_graph_misses_a_double_repair() {
        // Triangle, l = u = (2, 1, 1), F = {yz}: F is not optimal (F = {cy, cz}
        // is perfect), but the displayed auxiliary graph has no (x0⁻, x0⁻)
        // path because c has a single x0-edge.
        let t = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let spec = ClassicalSpec::new(vec![2, 1, 1], vec![2, 1, 1], vec![true; 3]).unwrap();
        let f = EdgeSubset::from_ids(3, [1]).unwrap();
        let verbatim = build_auxiliary(&t, &f, &spec).unwrap();
        let (_, minus) = reachable_masks(&verbatim.graph, verbatim.x0).unwrap();
        assert!(!minus[verbatim.x0]);
        let search = build_search_graph(&t, &f, &spec).unwrap();
        let (_, minus) = reachable_masks(&search.graph, search.x0).unwrap();
        assert!(minus[search.x0]);
        assert_eq!(classical_deficiency_from(&t, &spec, &f).unwrap().deficiency, 0);
    }

    #[test]
    fn cut_overlap_rejected() {
        let k2 = g(2, &[(0, 1)]);
        assert!(matches!(
            verify_factor_cut(&k2, &ClassicalSpec::perfect_matching(2), &[0], &[0]),
            Err(Error::Overlap(0))
        ));
        assert_eq!(verify_factor_cut(&k2, &ClassicalSpec::perfect_matching(2), &[], &[]).unwrap(), 0);
    }

    #[test]
    fn orientations() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let o = orientation_deficiency(&c4, &ClassicalSpec::perfect_matching(4)).unwrap();
        assert_eq!(o.deficiency, 0);
        assert_eq!(o.indegree, vec![1; 4]);

        let p = g(3, &[(1, 0), (0, 2)]);
        let spec = ClassicalSpec::new(vec![2, 0, 0], vec![2, 0, 0], vec![true; 3]).unwrap();
        let o = orientation_deficiency(&p, &spec).unwrap();
        assert_eq!(o.deficiency, 0);
        assert_eq!(o.arcs, vec![(1, 0), (2, 0)]);

        let lp = g(1, &[(0, 0)]);
        let o = orientation_deficiency(&lp, &ClassicalSpec::perfect_matching(1)).unwrap();
        assert_eq!(o.deficiency, 0);
    }
}
