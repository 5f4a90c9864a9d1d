//! Minimum T-joins under ±1 weights, conservativeness, distance levels and
//! T-cut packings.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::graph::{odd_vertices, EdgeId, EdgeSubset, Graph, Vertex};

/// Edge weights in {+1, −1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PmWeighting(Vec<i8>);

impl PmWeighting {
    pub fn new(w: Vec<i64>) -> Result<Self> {
        w.into_iter()
            .map(|x| match x {
                1 => Ok(1),
                -1 => Ok(-1),
                other => Err(Error::BadWeight(other)),
            })
            .collect::<Result<Vec<i8>>>()
            .map(PmWeighting)
    }

    pub fn ones(m: usize) -> Self {
        PmWeighting(vec![1; m])
    }

    /// The weighting 1[F]: −1 on `f`, +1 elsewhere.
    pub fn negative_on(f: &EdgeSubset) -> Self {
        PmWeighting(f.as_bools().iter().map(|&b| if b { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> i64 {
        self.0[e] as i64
    }

    /// E⁻, the negative edges.
    pub fn negative_set(&self) -> EdgeSubset {
        EdgeSubset::from_bools(self.0.iter().map(|&x| x < 0).collect())
    }

    pub fn weight(&self, f: &EdgeSubset) -> i64 {
        f.ids().map(|e| self.get(e)).sum()
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.len() != g.m() {
            return Err(Error::DimensionMismatch { expected: g.m(), got: self.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TJoin {
    pub join: EdgeSubset,
    pub weight: i64,
}

fn terminal_mask(g: &Graph, t: &[Vertex]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.n()];
    for &v in t {
        g.check_vertex(v)?;
        mask[v] = !mask[v];
    }
    Ok(mask)
}

/// BFS tree from `s` ignoring loops: (distance, parent edge).
fn bfs(g: &Graph, s: Vertex) -> (Vec<usize>, Vec<EdgeId>) {
    let mut dist = vec![usize::MAX; g.n()];
    let mut par = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &(e, y) in g.incident(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                par[y] = e;
                q.push_back(y);
            }
        }
    }
    (dist, par)
}

/// Minimum-weight perfect matching of the complete graph on `k` vertices
/// with weights `d(i, j)`. Returns the mate of every vertex.
fn min_perfect_matching(k: usize, d: impl Fn(usize, usize) -> usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == 2 {
        return Ok(vec![1, 0]);
    }
    let big = (0..k).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| d(i, j)).max().unwrap_or(0) + 1;
    let big = i32::try_from(big).map_err(|_| internal("distances too large"))?;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            edges.push((i, j, big - d(i, j) as i32));
        }
    }
    let mate = mwmatching::Matching::new(edges).max_cardinality().solve();
    if mate.len() != k || mate.contains(&mwmatching::SENTINEL) {
        return Err(internal("terminal matching is not perfect"));
    }
    Ok(mate)
}

/// Minimum-cardinality T-join given T as a mask.
fn min_cardinality_join(g: &Graph, t: &[bool]) -> Result<EdgeSubset> {
    let all = vec![true; g.n()];
    let mut join = EdgeSubset::empty(g.m());
    for comp in g.components_masked(&all, |_| true) {
        let terms: Vec<Vertex> = comp.iter().copied().filter(|&v| t[v]).collect();
        if terms.len() % 2 == 1 {
            return Err(Error::OddComponent(comp[0]));
        }
        if terms.is_empty() {
            continue;
        }
        let trees: Vec<_> = terms.iter().map(|&s| bfs(g, s)).collect();
        let mate = min_perfect_matching(terms.len(), |i, j| trees[i].0[terms[j]])?;
        for i in 0..terms.len() {
            let j = mate[i];
            if j < i {
                continue;
            }
            // walk from terms[j] back to terms[i] along i's BFS tree
            let (_, par) = &trees[i];
            let mut at = terms[j];
            while at != terms[i] {
                let e = par[at];
                join.toggle(e);
                let (a, b) = g.edges()[e];
                at = if a == at { b } else { a };
            }
        }
    }
    Ok(join)
}

/// Minimum w-weight T-join. With N = E⁻, a set F is a T-join iff F Δ N is a
/// (T Δ T_N)-join, and w(F) = |F Δ N| − |N|.
pub fn min_tjoin(g: &Graph, t: &[Vertex], w: &PmWeighting) -> Result<TJoin> {
    w.check(g)?;
    let n_set = w.negative_set();
    let mut t_mask = terminal_mask(g, t)?;
    for v in odd_vertices(g, &n_set)? {
        t_mask[v] = !t_mask[v];
    }
    let j = min_cardinality_join(g, &t_mask)?;
    let join = j.symmetric_difference(&n_set);
    let weight = w.weight(&join);
    let expect = terminal_mask(g, t)?;
    let odd = odd_vertices(g, &join)?;
    if odd.len() != expect.iter().filter(|&&b| b).count() || odd.iter().any(|&v| !expect[v]) {
        return Err(internal("join has the wrong odd set"));
    }
    Ok(TJoin { join, weight })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conservativeness {
    pub conservative: bool,
    /// Edges of a negative circuit in traversal order.
    pub negative_circuit: Option<Vec<EdgeId>>,
}

/// Splits an edge set with all degrees even into circuits.
pub fn circuit_decomposition(g: &Graph, c: &EdgeSubset) -> Vec<Vec<EdgeId>> {
    let mut left = c.clone();
    let mut out = Vec::new();
    for e in c.ids() {
        if g.is_loop(e) {
            left.remove(e);
            out.push(vec![e]);
        }
    }
    let mut pos = vec![usize::MAX; g.n()];
    loop {
        let Some(first) = left.ids().next() else { break };
        let start = g.edges()[first].0;
        let mut stack_v = vec![start];
        let mut stack_e: Vec<EdgeId> = Vec::new();
        pos[start] = 0;
        let mut at = start;
        // With even degrees the walk can only get stuck back at an empty stack.
        while let Some(&(e, y)) = g.incident(at).iter().find(|&&(e, _)| left.contains(e)) {
            left.remove(e);
            stack_e.push(e);
            if pos[y] != usize::MAX {
                let k = pos[y];
                out.push(stack_e[k..].to_vec());
                for &v in &stack_v[k + 1..] {
                    pos[v] = usize::MAX;
                }
                stack_v.truncate(k + 1);
                stack_e.truncate(k);
            } else {
                pos[y] = stack_v.len();
                stack_v.push(y);
            }
            at = y;
        }
        for &v in &stack_v {
            pos[v] = usize::MAX;
        }
    }
    out
}

/// Guan's criterion: w is conservative iff E⁻ is a minimum T_{E⁻}-join for
/// unit weights. Otherwise E⁻ Δ J is a negative-weight even set, and one of
/// its circuits is returned.
pub fn is_conservative(g: &Graph, w: &PmWeighting) -> Result<Conservativeness> {
    w.check(g)?;
    let n_set = w.negative_set();
    let t = odd_vertices(g, &n_set)?;
    let j = min_cardinality_join(g, &terminal_mask(g, &t)?)?;
    if j.count() == n_set.count() {
        return Ok(Conservativeness { conservative: true, negative_circuit: None });
    }
    let c = n_set.symmetric_difference(&j);
    let circuit = circuit_decomposition(g, &c)
        .into_iter()
        .find(|cyc| cyc.iter().map(|&e| w.get(e)).sum::<i64>() < 0)
        .ok_or_else(|| internal("negative even set without a negative circuit"))?;
    Ok(Conservativeness { conservative: false, negative_circuit: Some(circuit) })
}

/// λ(x) = minimum weight of an {x0, x}-join, for a connected graph with a
/// conservative weighting.
pub fn lambda_distances(g: &Graph, w: &PmWeighting, x0: Vertex) -> Result<Vec<i64>> {
    g.check_vertex(x0)?;
    w.check(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !is_conservative(g, w)?.conservative {
        return Err(Error::NotConservative);
    }
    (0..g.n())
        .map(|x| if x == x0 { Ok(0) } else { Ok(min_tjoin(g, &[x0, x], w)?.weight) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    pub i: i64,
    /// Components of G(V^i).
    pub d: Vec<Vec<Vertex>>,
    /// Components of G(V^i) minus the edges with both ends at level i.
    pub d_hat: Vec<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelFamily {
    pub x0: Vertex,
    pub lambda: Vec<i64>,
    pub levels: Vec<Level>,
}

impl LevelFamily {
    /// Distinct members of 𝒟 (over all levels) in order of appearance.
    pub fn distinct_d(&self) -> Vec<Vec<Vertex>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for lv in &self.levels {
            for d in &lv.d {
                if seen.insert(d.clone()) {
                    out.push(d.clone());
                }
            }
        }
        out
    }
}

pub fn level_families(g: &Graph, w: &PmWeighting, x0: Vertex) -> Result<LevelFamily> {
    let lambda = lambda_distances(g, w, x0)?;
    Ok(families_from_lambda(g, x0, lambda))
}

pub(crate) fn families_from_lambda(g: &Graph, x0: Vertex, lambda: Vec<i64>) -> LevelFamily {
    let lo = lambda.iter().copied().min().unwrap_or(0);
    let hi = lambda.iter().copied().max().unwrap_or(0);
    let mut levels = Vec::new();
    for i in lo..=hi {
        let inside: Vec<bool> = lambda.iter().map(|&l| l <= i).collect();
        let d = g.components_masked(&inside, |_| true);
        let d_hat = g.components_masked(&inside, |e| {
            let (u, v) = g.edges()[e];
            !(lambda[u] == i && lambda[v] == i)
        });
        levels.push(Level { i, d, d_hat });
    }
    LevelFamily { x0, lambda, levels }
}

/// Number of negative edges in δ(D).
pub fn negative_boundary(g: &Graph, w: &PmWeighting, d: &[Vertex]) -> Result<usize> {
    Ok(g.boundary(d)?.ids().filter(|&e| w.get(e) < 0).count())
}

/// Every D in every 𝒟^i and 𝒟̂^i has exactly one negative boundary edge,
/// or none when it contains x0.
pub fn verify_structure(g: &Graph, w: &PmWeighting, x0: Vertex, fam: &LevelFamily) -> Result<bool> {
    w.check(g)?;
    for lv in &fam.levels {
        for d in lv.d.iter().chain(&lv.d_hat) {
            let expect = if d.contains(&x0) { 0 } else { 1 };
            if negative_boundary(g, w, d)? != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A T-cut δ(D) with its shore D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TCut {
    pub shore: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

fn is_tcut(g: &Graph, t: &[bool], shore: &[Vertex]) -> bool {
    shore.iter().filter(|&&v| t[v]).count() % 2 == 1 && !shore.is_empty() && shore.len() < g.n()
}

/// τ pairwise disjoint T-cuts of a bipartite graph, read off the distance
/// levels of 1[F] for a minimum T-join F in each component.
pub fn bipartite_tcut_packing(g: &Graph, t: &[Vertex]) -> Result<Vec<TCut>> {
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let tm = terminal_mask(g, t)?;
    let f = min_tjoin(g, t, &PmWeighting::ones(g.m()))?;
    let all = vec![true; g.n()];
    let mut cuts = Vec::new();
    for comp in g.components_masked(&all, |_| true) {
        let mut keep = vec![false; g.n()];
        for &v in &comp {
            keep[v] = true;
        }
        let (sub, orig) = g.induced(&keep);
        // edges of the induced subgraph, in order, map to original ids
        let sub_edges: Vec<EdgeId> =
            (0..g.m()).filter(|&e| keep[g.edges()[e].0]).collect();
        let wsub = PmWeighting::negative_on(&EdgeSubset::from_bools(
            sub_edges.iter().map(|&e| f.join.contains(e)).collect(),
        ));
        let fam = level_families(&sub, &wsub, 0)?;
        for d in fam.distinct_d() {
            if d.contains(&0) {
                continue;
            }
            let shore: Vec<Vertex> = d.iter().map(|&v| orig[v]).collect();
            let edges: Vec<EdgeId> = g.boundary(&shore)?.ids().collect();
            cuts.push(TCut { shore, edges });
        }
    }
    if cuts.len() != f.join.count() || cuts.iter().any(|c| !is_tcut(g, &tm, &c.shore)) {
        return Err(internal("level sets do not give τ disjoint T-cuts"));
    }
    Ok(cuts)
}

/// 2τ T-cuts covering every edge at most twice: pack in the subdivision and
/// restrict each shore to the original vertices.
pub fn tcut_2packing(g: &Graph, t: &[Vertex]) -> Result<Vec<TCut>> {
    let tm = terminal_mask(g, t)?;
    let (s, _) = g.subdivide();
    let t_sub: Vec<Vertex> = t.to_vec();
    let packed = bipartite_tcut_packing(&s, &t_sub)?;
    let mut cuts = Vec::new();
    for c in packed {
        let shore: Vec<Vertex> = c.shore.iter().copied().filter(|&v| v < g.n()).collect();
        let edges: Vec<EdgeId> = g.boundary(&shore)?.ids().collect();
        if !is_tcut(g, &tm, &shore) {
            return Err(internal("restricted shore is not a T-cut"));
        }
        cuts.push(TCut { shore, edges });
    }
    Ok(cuts)
}

/// How many cuts contain each edge.
pub fn coverage(g: &Graph, cuts: &[TCut]) -> Vec<usize> {
    let mut cov = vec![0; g.m()];
    for c in cuts {
        for &e in &c.edges {
            cov[e] += 1;
        }
    }
    cov
}

/// Outcome of [`barrier_from_matching`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceBarrier {
    pub vertices: Vec<Vertex>,
    pub lambda: Vec<i64>,
}

/// Tutte–Berge barrier from distances: extend G by a vertex x0 joined to
/// all vertices, weight −1 on M and on x0v for missed v, +1 elsewhere. The
/// weighting is conservative iff M is maximum; then the level-0 vertices of
/// the x0-component of 𝒟̂^0 (other than x0) form a barrier.
pub fn barrier_from_matching(g: &Graph, m: &EdgeSubset) -> Result<DistanceBarrier> {
    if !crate::matching::is_matching(g, m)? {
        return Err(Error::NotAMatching);
    }
    let n = g.n();
    let x0 = n;
    let d = g.degree_vector(m)?;
    let mut edges = g.edges().to_vec();
    let mut w: Vec<i64> = (0..g.m()).map(|e| if m.contains(e) { -1 } else { 1 }).collect();
    for v in 0..n {
        edges.push((x0, v));
        w.push(if d[v] == 0 { -1 } else { 1 });
    }
    let ext = Graph::new(n + 1, edges)?;
    let w = PmWeighting::new(w)?;
    let cons = is_conservative(&ext, &w)?;
    if let Some(circuit) = cons.negative_circuit {
        let path: Vec<EdgeId> = circuit.into_iter().filter(|&e| e < g.m()).collect();
        return Err(Error::NotMaximum { augmenting_path: path });
    }
    let lambda = lambda_distances(&ext, &w, x0)?;
    let inside: Vec<bool> = lambda.iter().map(|&l| l <= 0).collect();
    let comps = ext.components_masked(&inside, |e| {
        let (u, v) = ext.edges()[e];
        !(lambda[u] == 0 && lambda[v] == 0)
    });
    let d0 = comps.into_iter().find(|c| c.contains(&x0)).ok_or_else(|| internal("x0 has no level"))?;
    let vertices = d0.into_iter().filter(|&x| x != x0 && lambda[x] == 0).collect();
    let mut lambda = lambda;
    lambda.pop();
    Ok(DistanceBarrier { vertices, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn path_join() {
        let p = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let j = min_tjoin(&p, &[0, 3], &PmWeighting::ones(3)).unwrap();
        assert_eq!(j.weight, 3);
        let j = min_tjoin(&p, &[0, 1, 2, 3], &PmWeighting::ones(3)).unwrap();
        assert_eq!(j.weight, 2);
        assert!(matches!(min_tjoin(&p, &[0], &PmWeighting::ones(3)), Err(Error::OddComponent(_))));
    }

    #[test]
    fn negative_edges_are_taken() {
        let c = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let w = PmWeighting::new(vec![-1, 1, 1]).unwrap();
        let j = min_tjoin(&c, &[0, 1], &w).unwrap();
        assert_eq!(j.weight, -1);
        assert!(is_conservative(&c, &w).unwrap().conservative);
    }

    #[test]
    fn negative_triangle_detected() {
        let c = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let w = PmWeighting::new(vec![-1, -1, 1]).unwrap();
        let r = is_conservative(&c, &w).unwrap();
        assert!(!r.conservative);
        let cyc = r.negative_circuit.unwrap();
        assert_eq!(cyc.len(), 3);
    }

    #[test]
    fn negative_loop_is_a_circuit() {
        let h = g(1, &[(0, 0)]);
        let r = is_conservative(&h, &PmWeighting::new(vec![-1]).unwrap()).unwrap();
        assert_eq!(r.negative_circuit, Some(vec![0]));
    }

    #[test]
    fn single_negative_edge_structure() {
        let k2 = g(2, &[(0, 1)]);
        let w = PmWeighting::new(vec![-1]).unwrap();
        let fam = level_families(&k2, &w, 0).unwrap();
        assert_eq!(fam.lambda, vec![0, -1]);
        assert!(verify_structure(&k2, &w, 0, &fam).unwrap());
    }

    #[test]
    fn star_barrier_by_distances() {
        let s = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let m = EdgeSubset::from_ids(3, [0]).unwrap();
        let b = barrier_from_matching(&s, &m).unwrap();
        assert_eq!(b.vertices, vec![0]);
        let empty = EdgeSubset::empty(3);
        assert!(matches!(barrier_from_matching(&s, &empty), Err(Error::NotMaximum { .. })));
    }

    #[test]
    fn odd_cycle_packing() {
        let c = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let cuts = bipartite_tcut_packing(&c, &[0, 2]).unwrap();
        assert_eq!(cuts.len(), 2);
        let tri = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let cuts = tcut_2packing(&tri, &[0, 1]).unwrap();
        assert_eq!(cuts.len(), 2);
        assert!(coverage(&tri, &cuts).iter().all(|&c| c <= 2));
    }
}
