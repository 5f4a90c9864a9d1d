//! Jump systems given by a parity oracle, explicit point sets with the
//! 2-step axiom, pushes, and sponge-distance minimization.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bidirected::classical_deficiency;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reduction;
pub use crate::reduction::{call_bound, ReductionTrace};
use crate::sponge::{ClassicalSpec, Sponge, SpongeVector};

/// A jump system accessed through a parity oracle.
pub trait JumpSystemOracle {
    fn dim(&self) -> usize;

    /// A point of J nearest (in ℓ1) to the parity sponge `p`, with its distance.
    fn parity_optimize(&self, p: &SpongeVector) -> Result<(Vec<i64>, u64)>;

    /// Membership, when the system can answer it.
    fn contains(&self, _x: &[i64]) -> Option<bool> {
        None
    }
}

fn check_parity(p: &SpongeVector, dim: usize) -> Result<()> {
    if p.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
    }
    if let Some(i) = p.0.iter().position(|s| !s.is_parity()) {
        return Err(Error::NotParity(i));
    }
    Ok(())
}

/// Steps from `x` towards `y`: `x ± e_i` for every coordinate where they differ.
fn steps_towards<'a>(x: &'a [i64], y: &'a [i64]) -> impl Iterator<Item = Vec<i64>> + 'a {
    (0..x.len()).filter(move |&i| x[i] != y[i]).map(move |i| {
        let mut s = x.to_vec();
        s[i] += (y[i] - x[i]).signum();
        s
    })
}

/// A violation of the 2-step axiom: from `x` towards `y`, the first step
/// `step` leaves J and no second step towards `y` returns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub step: Vec<i64>,
}

/// Checks the 2-step axiom over all ordered pairs and first steps.
pub fn validate_two_step(points: &BTreeSet<Vec<i64>>) -> Result<Option<AxiomViolation>> {
    let Some(first) = points.iter().next() else {
        return Err(Error::EmptyPointSet);
    };
    let dim = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    for x in points {
        for y in points {
            for s in steps_towards(x, y) {
                if points.contains(&s) || steps_towards(&s, y).any(|t| points.contains(&t)) {
                    continue;
                }
                return Ok(Some(AxiomViolation { x: x.clone(), y: y.clone(), step: s }));
            }
        }
    }
    Ok(None)
}

/// A finite jump system, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplicitJumpSystem {
    dim: usize,
    points: BTreeSet<Vec<i64>>,
}

impl ExplicitJumpSystem {
    pub fn new(points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let points: BTreeSet<Vec<i64>> = points.into_iter().collect();
        if let Some(v) = validate_two_step(&points)? {
            return Err(Error::NotJumpSystem(format!(
                "from {:?} towards {:?} the step {:?} cannot be completed",
                v.x, v.y, v.step
            )));
        }
        let dim = points.iter().next().map_or(0, Vec::len);
        Ok(ExplicitJumpSystem { dim, points })
    }

    pub fn points(&self) -> &BTreeSet<Vec<i64>> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Minimum of μ(x, H) over all points, first in lexicographic order.
    pub fn minimum(&self, h: &SpongeVector) -> Result<(Vec<i64>, u64)> {
        let mut best: Option<(&Vec<i64>, u64)> = None;
        for p in &self.points {
            let d = h.mu(p)?;
            if best.is_none_or(|b| d < b.1) {
                best = Some((p, d));
            }
        }
        let (p, d) = best.expect("validated systems are nonempty");
        Ok((p.clone(), d))
    }
}

/// The scanning parity oracle of an explicit system.
pub fn explicit_parity_oracle(s: &ExplicitJumpSystem, p: &SpongeVector) -> Result<(Vec<i64>, u64)> {
    check_parity(p, s.dim)?;
    s.minimum(p)
}

impl JumpSystemOracle for ExplicitJumpSystem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn parity_optimize(&self, p: &SpongeVector) -> Result<(Vec<i64>, u64)> {
        explicit_parity_oracle(self, p)
    }

    fn contains(&self, x: &[i64]) -> Option<bool> {
        Some(self.points.contains(x))
    }
}

/// Degree vectors of the subgraphs of a graph, optimized by the classical
/// factor solver.
#[derive(Debug, Clone)]
pub struct DegreeVectorOracle {
    graph: Graph,
}

impl DegreeVectorOracle {
    pub fn new(graph: Graph) -> Self {
        DegreeVectorOracle { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl JumpSystemOracle for DegreeVectorOracle {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    /// Each parity target is first intersected with [0, d(v)]; for degree
    /// vectors inside the box this leaves every distance unchanged.
    fn parity_optimize(&self, p: &SpongeVector) -> Result<(Vec<i64>, u64)> {
        check_parity(p, self.dim())?;
        let deg = self.graph.degrees();
        let mut clamped = Vec::with_capacity(p.dim());
        for (v, s) in p.0.iter().enumerate() {
            let kept: Vec<i64> = s.values().iter().copied().filter(|&x| x <= deg[v]).collect();
            if kept.is_empty() {
                return Err(Error::EmptyAfterClamp { vertex: v, degree: deg[v] });
            }
            clamped.push(Sponge::new(kept)?);
        }
        let spec = ClassicalSpec::from_sponges(&SpongeVector(clamped))?;
        let sol = classical_deficiency(&self.graph, &spec)?;
        let d = self.graph.degree_vector(&sol.factor)?.0;
        let mu = p.mu(&d)?;
        Ok((d, mu))
    }
}

/// A push from `x` towards H: a first step `x1` at `i` that decreases the
/// distance to H by one, then `x2 ∈ J` equal to `x1` or one step (at `j`)
/// from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Push {
    pub x: Vec<i64>,
    pub x1: Vec<i64>,
    pub x2: Vec<i64>,
    pub i: usize,
    pub j: Option<usize>,
}

/// A push from `x` towards H: the first decreasing step (coordinates in
/// order, +1 before −1) that can be completed.
pub fn push_towards(j: &dyn JumpSystemOracle, x: &[i64], h: &SpongeVector) -> Result<Option<Push>> {
    if h.dim() != j.dim() || x.len() != j.dim() {
        return Err(Error::DimensionMismatch { expected: j.dim(), got: x.len().max(h.dim()) });
    }
    let member = |p: &[i64]| j.contains(p).ok_or(Error::NoMembership);
    if !member(x)? {
        return Err(Error::NotMember);
    }
    for i in 0..x.len() {
        let here = h.0[i].dist(x[i]);
        if here == 0 {
            continue;
        }
        for delta in [1, -1] {
            if h.0[i].dist(x[i] + delta) + 1 != here {
                continue;
            }
            let mut x1 = x.to_vec();
            x1[i] += delta;
            if member(&x1)? {
                return Ok(Some(Push { x: x.to_vec(), x1: x1.clone(), x2: x1, i, j: None }));
            }
            // Any second step back into J is a push; take the one closest to
            // H, which never steps straight back to x unless nothing else works.
            let mut best: Option<(u64, Vec<i64>, usize)> = None;
            for k in 0..x.len() {
                for d2 in [1, -1] {
                    let mut x2 = x1.clone();
                    x2[k] += d2;
                    if member(&x2)? {
                        let mu = h.mu(&x2)?;
                        if best.as_ref().is_none_or(|b| mu < b.0) {
                            best = Some((mu, x2, k));
                        }
                    }
                }
            }
            if let Some((_, x2, k)) = best {
                return Ok(Some(Push { x: x.to_vec(), x1, x2, i, j: Some(k) }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpOutcome {
    pub point: Vec<i64>,
    pub deficiency: u64,
    pub trace: ReductionTrace,
}

/// Minimum of μ(x, H) over x ∈ J using only the parity oracle.
pub fn jump_sponge_deficiency(j: &dyn JumpSystemOracle, h: &SpongeVector) -> Result<JumpOutcome> {
    if h.dim() != j.dim() {
        return Err(Error::DimensionMismatch { expected: j.dim(), got: h.dim() });
    }
    let (point, deficiency, trace) = reduction::minimize(
        h,
        Vec::new(),
        |x: &Vec<i64>| x.clone(),
        |t: &SpongeVector, _: &Vec<i64>| Ok(j.parity_optimize(t)?.0),
    )?;
    Ok(JumpOutcome { point, deficiency, trace })
}
