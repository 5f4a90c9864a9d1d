//! Exhaustive reference implementations for small instances. None of these
//! share code with the solvers beyond the basic graph type.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::bidirected::{BidirectedGraph, Sign};
use crate::error::Result;
use crate::graph::{enumerate_subsets, enumerate_subsets_with_limit, EdgeSubset, Graph, Vertex};
use crate::sponge::{ClassicalSpec, SpongeVector};
use crate::tjoin::PmWeighting;

/// ν(G) by recursion on the first uncovered vertex, memoized on the set of
/// covered vertices. Fine up to about 20 vertices.
pub fn matching_number(g: &Graph) -> usize {
    assert!(g.n() < 64, "brute-force matching limited to 63 vertices");
    let nbrs: Vec<u64> = (0..g.n())
        .map(|v| g.incident(v).iter().filter(|&&(_, w)| w != v).fold(0u64, |acc, &(_, w)| acc | 1 << w))
        .collect();
    fn go(covered: u64, n: usize, nbrs: &[u64], memo: &mut HashMap<u64, usize>) -> usize {
        let Some(v) = (0..n).find(|&v| covered & 1 << v == 0) else {
            return 0;
        };
        if let Some(&r) = memo.get(&covered) {
            return r;
        }
        let c = covered | 1 << v;
        let mut best = go(c, n, nbrs, memo);
        let mut free = nbrs[v] & !c;
        while free != 0 {
            let w = free.trailing_zeros() as usize;
            free &= free - 1;
            best = best.max(1 + go(c | 1 << w, n, nbrs, memo));
        }
        memo.insert(covered, best);
        best
    }
    go(0, g.n(), &nbrs, &mut HashMap::new())
}

/// odd(G − X) − |X|.
pub fn barrier_value(g: &Graph, x: &[Vertex]) -> i64 {
    let mut keep = vec![true; g.n()];
    for &v in x {
        keep[v] = false;
    }
    let odd = g.components_masked(&keep, |_| true).iter().filter(|c| c.len() % 2 == 1).count();
    odd as i64 - x.len() as i64
}

/// max over X of odd(G − X) − |X|, by enumerating vertex sets.
pub fn max_barrier_value(g: &Graph) -> i64 {
    assert!(g.n() <= 20, "brute-force barrier limited to 20 vertices");
    (0..1u32 << g.n())
        .map(|mask| {
            let x: Vec<Vertex> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
            barrier_value(g, &x)
        })
        .max()
        .unwrap_or(0)
}

/// Minimum vertex cover size by enumeration.
pub fn min_vertex_cover(g: &Graph) -> usize {
    assert!(g.n() <= 20, "brute-force cover limited to 20 vertices");
    (0..1u32 << g.n())
        .filter(|&mask| g.edges().iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Minimum classical deficiency over all edge subsets.
pub fn classical_deficiency(g: &Graph, spec: &ClassicalSpec) -> Result<u64> {
    let mut best = u64::MAX;
    for f in enumerate_subsets(g)? {
        best = best.min(spec.deficiency(&g.degree_vector(&f)?)?);
    }
    Ok(best)
}

/// Minimum of μ(d_F, H) over all edge subsets.
pub fn general_deficiency(g: &Graph, h: &SpongeVector) -> Result<u64> {
    let mut best = u64::MAX;
    for f in enumerate_subsets(g)? {
        best = best.min(h.mu(&g.degree_vector(&f)?)?);
    }
    Ok(best)
}

/// All degree vectors of subgraphs.
pub fn degree_vectors(g: &Graph) -> Result<BTreeSet<Vec<i64>>> {
    let mut out = BTreeSet::new();
    for f in enumerate_subsets(g)? {
        out.insert(g.degree_vector(&f)?.0);
    }
    Ok(out)
}

/// Minimum weight of a T-join, or `None` if there is none.
pub fn min_tjoin(g: &Graph, t: &[Vertex], w: &PmWeighting) -> Result<Option<i64>> {
    let mut want = vec![false; g.n()];
    for &v in t {
        want[v] ^= true;
    }
    let mut best = None;
    for f in enumerate_subsets(g)? {
        let d = g.degree_vector(&f)?;
        if (0..g.n()).all(|v| (d[v] % 2 == 1) == want[v]) {
            let wt = f.ids().map(|e| w.get(e)).sum::<i64>();
            best = Some(best.map_or(wt, |b: i64| b.min(wt)));
        }
    }
    Ok(best)
}

/// λ(x) as the minimum weight of an {x0, x}-join (0 at x0).
pub fn lambda(g: &Graph, w: &PmWeighting, x0: Vertex) -> Result<Vec<Option<i64>>> {
    (0..g.n()).map(|x| if x == x0 { Ok(Some(0)) } else { min_tjoin(g, &[x0, x], w) }).collect()
}

/// Is there a circuit (edge set with all degrees even, nonempty) of
/// negative weight?
pub fn has_negative_circuit(g: &Graph, w: &PmWeighting) -> Result<bool> {
    for f in enumerate_subsets(g)? {
        let d = g.degree_vector(&f)?;
        if d.iter().all(|x| x % 2 == 0) && f.ids().map(|e| w.get(e)).sum::<i64>() < 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// V⁺ and V⁻ by subset sums: v^β is reachable iff some edge subset sums to
/// x0⁻ + v^β.
pub fn reachable_sets(bg: &BidirectedGraph, x0: Vertex) -> Result<(Vec<bool>, Vec<bool>)> {
    let n = bg.n();
    let shell = Graph::new(n, bg.edges().iter().map(|e| (e.u, e.v)).collect())?;
    let mut plus = vec![false; n];
    let mut minus = vec![false; n];
    for s in enumerate_subsets_with_limit(&shell, 22)? {
        let sum = bg.path_sum(&s.ids().collect::<Vec<_>>())?;
        let mut shifted = sum.clone();
        shifted[x0] += 1;
        let nz: Vec<Vertex> = (0..n).filter(|&v| shifted[v] != 0).collect();
        match nz.as_slice() {
            [v] if shifted[*v] == Sign::Plus.value() => plus[*v] = true,
            [v] if shifted[*v] == Sign::Minus.value() => minus[*v] = true,
            _ => {}
        }
    }
    Ok((plus, minus))
}

/// Vertices reachable from `s` along arcs.
pub fn directed_reach(n: usize, arcs: &[(Vertex, Vertex)], s: Vertex) -> Vec<bool> {
    let mut out = vec![Vec::new(); n];
    for &(a, b) in arcs {
        out[a].push(b);
    }
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                q.push_back(w);
            }
        }
    }
    seen
}

/// Minimum of μ(x, H) over an explicit point set.
pub fn jump_minimum(points: &BTreeSet<Vec<i64>>, h: &SpongeVector) -> Result<u64> {
    let mut best = u64::MAX;
    for p in points {
        best = best.min(h.mu(p)?);
    }
    Ok(best)
}

/// Is `f` a perfect matching?
pub fn is_perfect_matching(g: &Graph, f: &EdgeSubset) -> Result<bool> {
    Ok(g.degree_vector(f)?.iter().all(|&d| d == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(matching_number(&tri), 1);
        assert_eq!(max_barrier_value(&tri), 1);
        assert_eq!(min_vertex_cover(&tri), 2);
        let w = PmWeighting::ones(3);
        assert_eq!(min_tjoin(&tri, &[0, 1], &w).unwrap(), Some(1));
        assert_eq!(min_tjoin(&tri, &[0], &w).unwrap(), None);
        let bg = BidirectedGraph::from_digraph(3, &[(0, 1), (1, 2)]).unwrap();
        let (p, m) = reachable_sets(&bg, 0).unwrap();
        assert_eq!(p, vec![true, true, true]);
        assert_eq!(m, vec![false; 3]);
        assert_eq!(directed_reach(3, &[(0, 1), (1, 2)], 1), vec![false, true, true]);
    }
}
