//! Randomized structural properties checked against exhaustive search.

use std::collections::{BTreeSet, HashSet, VecDeque};

use factorum::general_factor::is_elementary;
use factorum::graph::enumerate_subsets;
use factorum::jump::{push_towards, DegreeVectorOracle, ExplicitJumpSystem, JumpSystemOracle};
use factorum::oracle;
use factorum::selftest::gen;
use factorum::sponge::Direction;
use factorum::{EdgeSubset, Graph, Sponge, SpongeVector};
use rand::Rng;

fn mu(g: &Graph, h: &SpongeVector, f: &EdgeSubset) -> u64 {
    h.mu(&g.degree_vector(f).unwrap()).unwrap()
}

fn random_instance(rng: &mut impl Rng, max_m: usize) -> (Graph, SpongeVector) {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(0..=max_m);
    let g = gen::graph(rng, n, m, 0.15);
    let h = gen::sponges_for(rng, &g);
    (g, h)
}

#[test]
fn elementary_changes_never_increase_distance() {
    let mut rng = gen::rng(11, 0);
    let mut checked = 0;
    for _ in 0..400 {
        let (g, h) = random_instance(&mut rng, 9);
        if g.m() == 0 {
            continue;
        }
        let mask = rng.gen_range(0..1u64 << g.m());
        let f = EdgeSubset::from_mask(g.m(), mask);
        let before = mu(&g, &h, &f);
        for e in 0..g.m() {
            let (a, b) = g.endpoints(e).unwrap();
            for pivot in [a, b] {
                if is_elementary(&g, &h, &f, e, pivot).unwrap() {
                    let mut f2 = f.clone();
                    f2.toggle(e);
                    assert!(mu(&g, &h, &f2) <= before, "{g:?} {h:?} F={mask:b} e={e} a={pivot}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 200, "only {checked} elementary changes exercised");
}

#[test]
fn elementary_changes_reach_an_optimum() {
    let mut rng = gen::rng(12, 0);
    for _ in 0..120 {
        let (g, h) = random_instance(&mut rng, 8);
        let best = oracle::general_deficiency(&g, &h).unwrap();
        let m = g.m();
        // From each subset, some sequence of elementary changes must end in
        // an optimum; search backwards from the optima instead of forwards
        // from every start.
        let mut succ: Vec<Vec<u64>> = vec![Vec::new(); 1 << m];
        for mask in 0..1u64 << m {
            let f = EdgeSubset::from_mask(m, mask);
            for e in 0..m {
                let (a, b) = g.endpoints(e).unwrap();
                if is_elementary(&g, &h, &f, e, a).unwrap() || is_elementary(&g, &h, &f, e, b).unwrap() {
                    succ[mask as usize].push(mask ^ 1 << e);
                }
            }
        }
        let mut pred: Vec<Vec<u64>> = vec![Vec::new(); 1 << m];
        for (from, tos) in succ.iter().enumerate() {
            for &to in tos {
                pred[to as usize].push(from as u64);
            }
        }
        let mut seen = vec![false; 1 << m];
        let mut queue = VecDeque::new();
        for mask in 0..1u64 << m {
            if mu(&g, &h, &EdgeSubset::from_mask(m, mask)) == best {
                seen[mask as usize] = true;
                queue.push_back(mask);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &p in &pred[x as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "{g:?} {h:?}");
    }
}

#[test]
fn escapes_only_shrink_the_target() {
    let mut rng = gen::rng(13, 0);
    for _ in 0..500 {
        let dim = rng.gen_range(1..=4);
        let h = SpongeVector((0..dim).map(|_| gen::sponge(&mut rng, 8)).collect());
        let z: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=10)).collect();
        let env = h.environment(&z).unwrap();
        assert!(env.is_parity());
        assert_eq!(env.mu(&z).unwrap(), h.mu(&z).unwrap());
        for esc in h.escapes(&z).unwrap() {
            for _ in 0..10 {
                let x: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=10)).collect();
                assert!(esc.sponge.mu(&x).unwrap() >= h.mu(&x).unwrap());
            }
        }
    }
}

/// Every push from `x`: a step at some coordinate towards H, then either
/// nothing (if already in J) or any step back into J.
fn all_pushes(j: &BTreeSet<Vec<i64>>, x: &[i64], h: &SpongeVector) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..x.len() {
        for d in [1, -1] {
            if h.0[i].dist(x[i] + d) + 1 != h.0[i].dist(x[i]) {
                continue;
            }
            let mut x1 = x.to_vec();
            x1[i] += d;
            if j.contains(&x1) {
                out.push(x1);
                continue;
            }
            for k in 0..x.len() {
                for d2 in [1, -1] {
                    let mut x2 = x1.clone();
                    x2[k] += d2;
                    if j.contains(&x2) {
                        out.push(x2);
                    }
                }
            }
        }
    }
    out
}

fn random_target(rng: &mut impl Rng, dim: usize) -> SpongeVector {
    SpongeVector((0..dim).map(|_| gen::sponge(rng, 8)).collect())
}

/// The environment moved: the second step left H_x through one of its
/// escapes, and the escape is strictly closer than H was. Membership of
/// x(j) in H(j) only holds when the two steps are at different coordinates.
fn check_environment_change(h: &SpongeVector, x: &[i64], x2: &[i64], i: usize, k: usize) {
    let before = h.mu(x).unwrap();
    assert!(h.mu(x2).unwrap() < before);
    assert!(h.0[k].contains(x2[k]), "{x:?} -> {x2:?} under {h:?}");
    if i != k {
        assert!(h.0[k].contains(x[k]), "{x:?} -> {x2:?} under {h:?}");
    }
    let (lo, hi) = h.0[k].environment_bounds(x[k]);
    let direction = if x2[k] < x[k] { Direction::Lower } else { Direction::Upper };
    assert_eq!(x2[k], if direction == Direction::Lower { lo - 1 } else { hi + 1 });
    let esc = h.escapes(x).unwrap().into_iter().find(|e| e.coord == k && e.direction == direction).expect("escape exists");
    assert!(esc.sponge.mu(x2).unwrap() < before);
}

#[test]
fn double_step_push_changes_environment_from_outside() {
    let j = ExplicitJumpSystem::new([vec![1], vec![3]]).unwrap();
    let h = SpongeVector(vec![Sponge::new(vec![2, 3]).unwrap()]);
    let p = push_towards(&j, &[1], &h).unwrap().unwrap();
    assert_eq!((p.x1.clone(), p.x2.clone(), p.j), (vec![2], vec![3], Some(0)));
    assert_ne!(h.environment(&[1]).unwrap(), h.environment(&[3]).unwrap());
    assert!(!h.0[0].contains(1));
    check_environment_change(&h, &[1], &p.x2, p.i, 0);
}

#[test]
fn pushes_behave() {
    let mut rng = gen::rng(14, 0);
    let mut changed_env = 0;
    for _ in 0..300 {
        let pts = gen::jump_system(&mut rng);
        if pts.is_empty() {
            continue;
        }
        let dim = pts.iter().next().unwrap().len();
        let j = ExplicitJumpSystem::new(pts.clone()).unwrap();
        let h = random_target(&mut rng, dim);
        for x in &pts {
            let before = h.mu(x).unwrap();
            let Some(p) = push_towards(&j, x, &h).unwrap() else {
                assert_eq!(before, 0, "no push from {x:?} towards {h:?}");
                continue;
            };
            assert!(pts.contains(&p.x2));
            assert_eq!(h.0[p.i].dist(p.x1[p.i]) + 1, h.0[p.i].dist(x[p.i]));
            if pts.contains(&p.x1) {
                assert_eq!(p.x1, p.x2);
                assert_eq!(p.j, None);
            }
            let after = h.mu(&p.x2).unwrap();
            assert!(after <= before, "{x:?} -> {:?} under {h:?}", p.x2);
            if h.environment(&p.x2).unwrap() != h.environment(x).unwrap() {
                changed_env += 1;
                check_environment_change(&h, x, &p.x2, p.i, p.j.expect("a single step keeps the environment"));
            }
        }
    }
    assert!(changed_env > 0, "dichotomy case never exercised");
}

#[test]
fn pushes_reach_an_optimum() {
    let mut rng = gen::rng(15, 0);
    for _ in 0..150 {
        let pts = gen::jump_system(&mut rng);
        if pts.is_empty() || pts.len() > 200 {
            continue;
        }
        let dim = pts.iter().next().unwrap().len();
        let h = random_target(&mut rng, dim);
        let best = oracle::jump_minimum(&pts, &h).unwrap();
        for start in &pts {
            let mut seen = HashSet::from([start.clone()]);
            let mut queue = VecDeque::from([start.clone()]);
            let mut found = false;
            while let Some(x) = queue.pop_front() {
                if h.mu(&x).unwrap() == best {
                    found = true;
                    break;
                }
                for y in all_pushes(&pts, &x, &h) {
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
            assert!(found, "from {start:?} in {pts:?} towards {h:?}");
        }
    }
}

#[test]
fn degree_oracle_matches_enumeration() {
    let mut rng = gen::rng(16, 0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(0..=10);
        let g = gen::graph(&mut rng, n, m, 0.15);
        let pts = oracle::degree_vectors(&g).unwrap();
        let explicit = ExplicitJumpSystem::new(pts.clone()).unwrap();
        let oracle = DegreeVectorOracle::new(g.clone());
        let p = SpongeVector(
            (0..n)
                .map(|_| {
                    let lo = rng.gen_range(0..=4);
                    let k = rng.gen_range(0..=2);
                    Sponge::parity(lo, lo + 2 * k).unwrap()
                })
                .collect(),
        );
        let want = oracle::jump_minimum(&pts, &p).unwrap();
        for j in [&explicit as &dyn JumpSystemOracle, &oracle] {
            match j.parity_optimize(&p) {
                Ok((x, d)) => {
                    assert_eq!(d, want, "{g:?} {p:?}");
                    assert_eq!(p.mu(&x).unwrap(), d);
                    assert!(pts.contains(&x));
                }
                // Only the degree oracle may refuse, and only when some
                // target lies entirely above the degree.
                Err(_) => {
                    let deg = g.degrees();
                    assert!((0..n).any(|v| p.0[v].min() > deg[v]), "{g:?} {p:?}");
                }
            }
        }
    }
}

#[test]
fn degree_vectors_satisfy_the_axiom() {
    let mut rng = gen::rng(17, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=6);
        let g = gen::graph(&mut rng, n, m, 0.2);
        let pts: BTreeSet<Vec<i64>> = enumerate_subsets(&g).unwrap().map(|f| g.degree_vector(&f).unwrap().0).collect();
        assert!(factorum::jump::validate_two_step(&pts).unwrap().is_none());
    }
}
