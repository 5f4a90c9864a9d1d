//! The desk-scale acceptance suite: random instance generators and the ten
//! checks against the exhaustive oracles in [`crate::oracle`].

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebraic::randomized_pm_test;
use crate::bidirected::{
    classical_deficiency, reachable_sets, verify_bidirected_cut, verify_factor_cut, BiEdge,
    BidirectedGraph, Sign,
};
use crate::error::Result;
use crate::general_factor::{general_factor_deficiency, improve_round};
use crate::graph::{EdgeSubset, Graph, Vertex};
use crate::jump::{jump_sponge_deficiency, validate_two_step, ExplicitJumpSystem};
use crate::matching::{is_cover, konig_cover, maximum_matching, verify_barrier};
use crate::oracle;
use crate::reduction::call_bound;
use crate::sponge::{ClassicalSpec, Sponge, SpongeVector};
use crate::tjoin::{
    bipartite_tcut_packing, coverage, level_families, min_tjoin, tcut_2packing, verify_structure,
    PmWeighting, TCut,
};

/// Random instance generators.
pub mod gen {
    use super::*;

    pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(stream);
        r
    }

    /// Multigraph with `m` uniformly random edges; loops with probability
    /// `loops` per edge.
    pub fn graph(rng: &mut impl Rng, n: usize, m: usize, loops: f64) -> Graph {
        let edges = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                if n == 1 || rng.gen_bool(loops) {
                    (u, u)
                } else {
                    let mut v = rng.gen_range(0..n - 1);
                    if v >= u {
                        v += 1;
                    }
                    (u.min(v), u.max(v))
                }
            })
            .collect();
        Graph::new(n, edges).expect("endpoints in range")
    }

    /// Simple graph with edge probability `p`.
    pub fn simple_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).expect("endpoints in range")
    }

    /// Connected multigraph: a random spanning tree plus `extra` edges.
    pub fn connected_graph(rng: &mut impl Rng, n: usize, extra: usize) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        let more = graph(rng, n, extra, 0.1);
        edges.extend_from_slice(more.edges());
        Graph::new(n, edges).expect("endpoints in range")
    }

    /// Bipartite graph with sides of the given sizes (left first).
    pub fn bipartite_graph(rng: &mut impl Rng, a: usize, b: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                if rng.gen_bool(p) {
                    edges.push((u, a + v));
                }
            }
        }
        Graph::new(a + b, edges).expect("endpoints in range")
    }

    /// A sponge inside [0, max]: interval, parity chain or a general set
    /// built by steps of one or two.
    pub fn sponge(rng: &mut impl Rng, max: i64) -> Sponge {
        let lo = rng.gen_range(0..=max);
        let hi = rng.gen_range(lo..=max);
        match rng.gen_range(0..3) {
            0 => Sponge::interval(lo, hi).unwrap(),
            1 => Sponge::parity(lo, hi - (hi - lo) % 2).unwrap(),
            _ => {
                let mut v = vec![lo];
                loop {
                    let next = v[v.len() - 1] + rng.gen_range(1..=2);
                    if next > hi {
                        break;
                    }
                    v.push(next);
                }
                Sponge::new(v).unwrap()
            }
        }
    }

    /// One sponge per vertex, within [0, degree].
    pub fn sponges_for(rng: &mut impl Rng, g: &Graph) -> SpongeVector {
        let deg = g.degrees();
        SpongeVector((0..g.n()).map(|v| sponge(rng, deg[v])).collect())
    }

    pub fn classical_spec(rng: &mut impl Rng, g: &Graph) -> ClassicalSpec {
        let deg = g.degrees();
        let mut l = Vec::new();
        let mut u = Vec::new();
        let mut parity = Vec::new();
        for v in 0..g.n() {
            let top = deg[v] + 1;
            let a = rng.gen_range(0..=top);
            let b = rng.gen_range(a..=top);
            let p = rng.gen_bool(0.5);
            l.push(a);
            u.push(if p { b - (b - a) % 2 } else { b });
            parity.push(p);
        }
        ClassicalSpec::new(l, u, parity).unwrap()
    }

    pub fn bidirected(rng: &mut impl Rng, n: usize, m: usize) -> BidirectedGraph {
        let sign = |r: &mut dyn rand::RngCore| if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let edges = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                BiEdge::new(u, sign(rng), v, sign(rng))
            })
            .collect();
        BidirectedGraph::new(n, edges).unwrap()
    }

    pub fn digraph(rng: &mut impl Rng, n: usize, m: usize) -> Vec<(Vertex, Vertex)> {
        (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    }

    /// T with |T ∩ C| even for every component C.
    pub fn even_terminals(rng: &mut impl Rng, g: &Graph) -> Vec<Vertex> {
        let mut t = Vec::new();
        let all = vec![true; g.n()];
        for comp in g.components_masked(&all, |_| true) {
            let mut pick: Vec<Vertex> = comp.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            if pick.len() % 2 == 1 {
                pick.pop();
            }
            t.extend(pick);
        }
        t.sort_unstable();
        t
    }

    fn minkowski(a: &BTreeSet<Vec<i64>>, b: &BTreeSet<Vec<i64>>) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        for x in a {
            for y in b {
                out.insert(x.iter().zip(y).map(|(p, q)| p + q).collect());
            }
        }
        out
    }

    fn box_points(rng: &mut impl Rng, dim: usize, max: i64) -> BTreeSet<Vec<i64>> {
        let s: Vec<Sponge> = (0..dim)
            .map(|_| {
                let lo = rng.gen_range(0..=max);
                Sponge::interval(lo, rng.gen_range(lo..=max)).unwrap()
            })
            .collect();
        product(&s)
    }

    fn product(s: &[Sponge]) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::from([Vec::new()]);
        for sp in s {
            out = out
                .iter()
                .flat_map(|p| {
                    sp.values().iter().map(move |&x| {
                        let mut q: Vec<i64> = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// 0/1 vectors of the r-subsets (bases of U(r, n)) or of all subsets of
    /// size at most r (its independent sets).
    fn uniform_matroid(dim: usize, r: usize, independent: bool) -> BTreeSet<Vec<i64>> {
        (0..1u32 << dim)
            .filter(|m| {
                let c = m.count_ones() as usize;
                if independent { c <= r } else { c == r }
            })
            .map(|m| (0..dim).map(|i| (m >> i & 1) as i64).collect())
            .collect()
    }

    /// Edge-incidence vectors of the spanning forests of a small graph.
    fn graphic_bases(rng: &mut impl Rng, dim: usize) -> BTreeSet<Vec<i64>> {
        let n = rng.gen_range(2..=4);
        let g = graph(rng, n, dim, 0.0);
        let all = vec![true; g.n()];
        let rank = g.n() - g.components_masked(&all, |_| true).len();
        let mut out = BTreeSet::new();
        for mask in 0..1u32 << dim {
            let keep: Vec<bool> = (0..dim).map(|e| mask >> e & 1 == 1).collect();
            let k = g.components_masked(&all, |e| keep[e]).len();
            if mask.count_ones() as usize == rank && g.n() - k == rank {
                out.insert(keep.iter().map(|&b| b as i64).collect());
            }
        }
        out
    }

    /// A random jump system of dimension 1..=4 with coordinates in [0, 8].
    pub fn jump_system(rng: &mut impl Rng) -> BTreeSet<Vec<i64>> {
        let dim = rng.gen_range(1..=4);
        let pts = match rng.gen_range(0..6) {
            0 => {
                let m = rng.gen_range(0..=5);
                let g = graph(rng, dim, m, 0.15);
                oracle::degree_vectors(&g).expect("few edges")
            }
            1 => {
                let r = rng.gen_range(0..=dim);
                uniform_matroid(dim, r, rng.gen_bool(0.5))
            }
            2 => graphic_bases(rng, dim),
            3 => box_points(rng, dim, 4),
            4 => {
                let s: Vec<Sponge> = (0..dim).map(|_| sponge(rng, 8)).collect();
                product(&s)
            }
            _ => {
                let r = rng.gen_range(0..=dim);
                let a = uniform_matroid(dim, r, false);
                let m = rng.gen_range(0..=3);
                let g = graph(rng, dim, m, 0.0);
                minkowski(&a, &oracle::degree_vectors(&g).expect("few edges"))
            }
        };
        pts.into_iter().filter(|p| p.iter().all(|&x| x <= 8)).collect::<BTreeSet<_>>()
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    pub elapsed_ms: f64,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({} cases, {} failures, {:.1} ms){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.cases,
            self.failures,
            self.elapsed_ms,
            if self.detail.is_empty() { String::new() } else { format!(": {}", self.detail) }
        )
    }
}

pub const CRITERIA: u32 = 10;

struct Tally {
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: 0, first: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                let w = what();
                self.check(false, || format!("{w}: error {e}"));
            }
        }
    }
}

fn report(id: u32, name: &'static str, t: Tally, start: Instant, extra: Option<String>) -> CriterionReport {
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut passed = t.failures == 0;
    let mut detail = t.first.unwrap_or_default();
    if let Some(x) = extra {
        passed = false;
        detail = if detail.is_empty() { x } else { format!("{detail}; {x}") };
    }
    CriterionReport { id, name, passed, cases: t.cases, failures: t.failures, elapsed_ms, detail }
}

fn over_budget(start: Instant, ms: f64) -> Option<String> {
    let el = start.elapsed().as_secs_f64() * 1e3;
    (el > ms).then(|| format!("took {el:.1} ms, budget {ms} ms"))
}

pub fn nine_parallel() -> (Graph, SpongeVector) {
    let g = Graph::new(2, vec![(0, 1); 9]).unwrap();
    let h = SpongeVector(vec![
        Sponge::new(vec![0, 1, 3, 5, 7, 9]).unwrap(),
        Sponge::new(vec![2, 4, 6, 8]).unwrap(),
    ]);
    (g, h)
}

fn c1_example() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let (g, h) = nine_parallel();
    t.result(general_factor_deficiency(&g, &h).map(|o| o.deficiency == 1), || "deficiency is not 1".into());
    let full = EdgeSubset::full(9);
    let lower_escape = h.escapes(&[9, 9]).map(|es| {
        es.iter()
            .find(|e| e.coord == 0 && e.direction == crate::sponge::Direction::Lower)
            .map(|e| e.sponge.mu(&[9, 9]).unwrap())
    });
    t.check(matches!(lower_escape, Ok(Some(10))), || format!("mu(E, lower escape at a) = {lower_escape:?}"));
    t.result(improve_round(&g, &h, &full).map(|r| r.is_none()), || "improve_round(E) is not None".into());
    let budget = over_budget(start, 10.0);
    report(1, "nine parallel edges example", t, start, budget)
}

fn general_instances(seed: u64) -> Vec<(Graph, SpongeVector)> {
    let mut rng = gen::rng(seed, 2);
    (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(0..=10);
            let g = gen::graph(&mut rng, n, m, 0.1);
            let h = gen::sponges_for(&mut rng, &g);
            (g, h)
        })
        .collect()
}

fn c2_general_factor(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    for (k, (g, h)) in general_instances(seed).iter().enumerate() {
        let r = general_factor_deficiency(g, h).and_then(|o| Ok(o.deficiency == oracle::general_deficiency(g, h)?));
        t.result(r, || format!("instance {k}: {g:?} {h:?}"));
    }
    let budget = over_budget(start, 30_000.0);
    report(2, "general factors against brute force", t, start, budget)
}

fn c3_call_bound(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for (k, (g, h)) in general_instances(seed).iter().enumerate() {
        let r = general_factor_deficiency(g, h).map(|o| {
            worst = worst.max(o.trace.oracle_calls as f64 / call_bound(g.n()) as f64);
            o.trace.oracle_calls <= call_bound(g.n())
        });
        t.result(r, || format!("instance {k} exceeds the call bound"));
    }
    let mut rep = report(3, "parity oracle call bound", t, start, None);
    if rep.detail.is_empty() {
        rep.detail = format!("largest calls/bound ratio {worst:.2}");
    }
    rep
}

fn c4_jump(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 4);
    while t.cases < 300 {
        let pts = gen::jump_system(&mut rng);
        if pts.is_empty() {
            continue;
        }
        let valid = matches!(validate_two_step(&pts), Ok(None));
        if !valid {
            t.check(false, || format!("generated set is not a jump system: {pts:?}"));
            continue;
        }
        let j = ExplicitJumpSystem::new(pts.clone()).expect("validated");
        let dim = pts.iter().next().unwrap().len();
        let h = SpongeVector((0..dim).map(|_| gen::sponge(&mut rng, 8)).collect());
        let r = jump_sponge_deficiency(&j, &h).and_then(|o| {
            Ok(o.deficiency == oracle::jump_minimum(&pts, &h)?
                && pts.contains(&o.point)
                && o.trace.oracle_calls <= call_bound(dim))
        });
        t.result(r, || format!("system {pts:?} with {h:?}"));
    }
    report(4, "jump systems against exhaustive minimum", t, start, None)
}

fn c5_tutte_berge(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 5);
    for k in 0..500 {
        let n = rng.gen_range(1..=9);
        let g = if rng.gen_bool(0.5) {
            let p = rng.gen_range(0.1..0.7);
            gen::simple_graph(&mut rng, n, p)
        } else {
            let m = rng.gen_range(0..=2 * n);
            gen::graph(&mut rng, n, m, 0.1)
        };
        let r = maximum_matching(&g).and_then(|mm| {
            let nu = oracle::matching_number(&g);
            let missed = (g.n() - 2 * nu) as i64;
            Ok(mm.size == nu
                && oracle::barrier_value(&g, &mm.barrier.vertices) == missed
                && verify_barrier(&g, &mm.matching, &mm.barrier.vertices)?)
        });
        t.result(r, || format!("graph {k}: {g:?}"));
    }
    report(5, "Tutte-Berge duality", t, start, None)
}

fn c6_konig(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 6);
    for k in 0..200 {
        let (a, b) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
        let p = rng.gen_range(0.1..0.8);
        let g = gen::bipartite_graph(&mut rng, a, b, p);
        let r = konig_cover(&g).map(|c| c.len() == oracle::matching_number(&g) && is_cover(&g, &c));
        t.result(r, || format!("graph {k}: {g:?}"));
    }
    report(6, "Konig covers", t, start, None)
}

fn c7_algebraic(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 7);
    for k in 0..500u64 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.15..0.8);
        let g = gen::simple_graph(&mut rng, n, p);
        let r = randomized_pm_test(&g, 3, seed.wrapping_add(k)).and_then(|v| {
            let mm = maximum_matching(&g)?;
            let perfect = 2 * mm.size == g.n();
            let confirmed = !v.has_pm() || oracle::is_perfect_matching(&g, &mm.matching)?;
            Ok(v.has_pm() == perfect && confirmed)
        });
        t.result(r, || format!("graph {k}: {g:?}"));
    }
    report(7, "randomized perfect matching tests", t, start, None)
}

fn is_tcut(g: &Graph, t: &[Vertex], c: &TCut) -> bool {
    let odd = c.shore.iter().filter(|v| t.contains(v)).count() % 2 == 1;
    let edges: Vec<_> = g.boundary(&c.shore).map(|b| b.ids().collect()).unwrap_or_default();
    odd && edges == c.edges
}

fn c8_tjoin(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 8);
    for k in 0..200 {
        let n = rng.gen_range(1..=6);
        let extra = rng.gen_range(0..=(10 - (n - 1)).min(6));
        let g = gen::connected_graph(&mut rng, n, extra);
        let term = gen::even_terminals(&mut rng, &g);
        let x0 = rng.gen_range(0..n);
        let r = (|| {
            let w1 = PmWeighting::ones(g.m());
            let j = min_tjoin(&g, &term, &w1)?;
            let tau = j.join.count();
            if Some(j.weight) != oracle::min_tjoin(&g, &term, &w1)? {
                return Ok(false);
            }
            let w = PmWeighting::negative_on(&j.join);
            if !verify_structure(&g, &w, x0, &level_families(&g, &w, x0)?)? {
                return Ok(false);
            }
            if g.is_bipartite() {
                let cuts = bipartite_tcut_packing(&g, &term)?;
                let disjoint = coverage(&g, &cuts).iter().all(|&c| c <= 1);
                if cuts.len() != tau || !disjoint || !cuts.iter().all(|c| is_tcut(&g, &term, c)) {
                    return Ok(false);
                }
            }
            let cuts = tcut_2packing(&g, &term)?;
            let double = coverage(&g, &cuts).iter().all(|&c| c <= 2);
            Ok(cuts.len() == 2 * tau && double && cuts.iter().all(|c| is_tcut(&g, &term, c)))
        })();
        t.result(r, || format!("instance {k}: {g:?} T={term:?} x0={x0}"));
    }
    report(8, "T-join structure and T-cut packings", t, start, None)
}

fn c9_bidirected(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 9);
    for k in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=10);
        let bg = gen::bidirected(&mut rng, n, m);
        let x0 = rng.gen_range(0..n);
        let r = reachable_sets(&bg, x0).and_then(|res| {
            let (p, mi) = oracle::reachable_sets(&bg, x0)?;
            let ps: Vec<Vertex> = (0..n).filter(|&v| p[v]).collect();
            let ms: Vec<Vertex> = (0..n).filter(|&v| mi[v]).collect();
            Ok(res.plus == ps && res.minus == ms && verify_bidirected_cut(&bg, x0, &res.plus, &res.minus))
        });
        t.result(r, || format!("instance {k}: {bg:?} x0={x0}"));
    }
    for k in 0..50 {
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(0..=12);
        let arcs = gen::digraph(&mut rng, n, m);
        let x0 = rng.gen_range(0..n);
        let r = BidirectedGraph::from_digraph(n, &arcs).and_then(|bg| reachable_sets(&bg, x0)).map(|res| {
            let reach = oracle::directed_reach(n, &arcs, x0);
            res.plus == (0..n).filter(|&v| reach[v]).collect::<Vec<_>>() && res.minus.is_empty()
        });
        t.result(r, || format!("digraph {k}: {arcs:?} x0={x0}"));
    }
    report(9, "bidirected reachability", t, start, None)
}

fn c10_classical(seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = gen::rng(seed, 10);
    for k in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=10);
        let g = gen::graph(&mut rng, n, m, 0.1);
        let spec = gen::classical_spec(&mut rng, &g);
        let r = classical_deficiency(&g, &spec).and_then(|sol| {
            let brute = oracle::classical_deficiency(&g, &spec)?;
            let cut = verify_factor_cut(&g, &spec, &sol.cut.lower, &sol.cut.upper)?;
            let achieved = spec.deficiency(&g.degree_vector(&sol.factor)?)?;
            Ok(sol.deficiency == brute && achieved == brute && cut == brute as i64)
        });
        t.result(r, || format!("instance {k}: {g:?} {spec:?}"));
    }
    report(10, "classical factor duality", t, start, None)
}

/// Runs one criterion (1..=10).
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionReport> {
    Some(match id {
        1 => c1_example(),
        2 => c2_general_factor(seed),
        3 => c3_call_bound(seed),
        4 => c4_jump(seed),
        5 => c5_tutte_berge(seed),
        6 => c6_konig(seed),
        7 => c7_algebraic(seed),
        8 => c8_tjoin(seed),
        9 => c9_bidirected(seed),
        10 => c10_classical(seed),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=CRITERIA).filter_map(|id| run_criterion(id, seed)).collect()
}

