//! The environment/escape reduction from sponge targets to parity targets,
//! shared by the graph and the jump-system versions.

use serde::Serialize;

use crate::error::{internal, Result};
use crate::sponge::{Direction, Sponge, SpongeVector};

/// Which parity target a solve was made against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TargetTag {
    /// The initial (l, u, all-parity) problem.
    Initial,
    Environment,
    Escape { vertex: usize, direction: Direction },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub round: usize,
    pub target: TargetTag,
    /// Distance of the solver's answer from the target it was asked about.
    pub target_distance: u64,
    /// Distance of the same answer from H.
    pub distance: u64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    /// Number of improving rounds accepted.
    pub rounds: usize,
    pub oracle_calls: usize,
}

/// (2n+1)n + n + 1.
pub fn call_bound(n: usize) -> usize {
    (2 * n + 1) * n + n + 1
}

/// The parity sponge {l, l+2, ...} spanning as much of [min H, max H] as
/// parity allows.
pub fn initial_parity_target(h: &SpongeVector) -> SpongeVector {
    SpongeVector(
        h.0.iter()
            .map(|s| {
                let (l, u) = (s.min(), s.max());
                Sponge::parity(l, u - (u - l) % 2).expect("l <= u with matching parity")
            })
            .collect(),
    )
}

/// All parity targets of one round at point `z`: the environment first,
/// then the escapes by coordinate, lower before upper.
pub fn round_targets(h: &SpongeVector, z: &[i64]) -> Result<Vec<(TargetTag, SpongeVector)>> {
    let mut out = vec![(TargetTag::Environment, h.environment(z)?)];
    for esc in h.escapes(z)? {
        out.push((TargetTag::Escape { vertex: esc.coord, direction: esc.direction }, esc.sponge));
    }
    Ok(out)
}

/// One round from `current`: solve every target, accept answers whose
/// distance to their own target is below μ(current, H), and return the
/// accepted answer closest to H (first in target order on ties).
pub fn round<S: Clone>(
    h: &SpongeVector,
    current: &S,
    point: &impl Fn(&S) -> Vec<i64>,
    solve: &mut impl FnMut(&SpongeVector, &S) -> Result<S>,
    round_no: usize,
    trace: &mut ReductionTrace,
) -> Result<Option<(S, TargetTag)>> {
    let z = point(current);
    let mu = h.mu(&z)?;
    let mut best: Option<(S, TargetTag, u64)> = None;
    for (tag, target) in round_targets(h, &z)? {
        let y = solve(&target, current)?;
        trace.oracle_calls += 1;
        let py = point(&y);
        let target_distance = target.mu(&py)?;
        let distance = h.mu(&py)?;
        let accepted = target_distance < mu;
        if accepted && distance >= mu {
            return Err(internal("accepted answer is not closer to H"));
        }
        trace.steps.push(TraceStep { round: round_no, target: tag, target_distance, distance, accepted });
        if accepted && best.as_ref().is_none_or(|b| distance < b.2) {
            best = Some((y, tag, distance));
        }
    }
    Ok(best.map(|(y, tag, _)| (y, tag)))
}

/// Initial parity solve, then rounds until none improves.
pub fn minimize<S: Clone>(
    h: &SpongeVector,
    start: S,
    point: impl Fn(&S) -> Vec<i64>,
    mut solve: impl FnMut(&SpongeVector, &S) -> Result<S>,
) -> Result<(S, u64, ReductionTrace)> {
    let mut trace = ReductionTrace::default();
    let p = initial_parity_target(h);
    let mut current = solve(&p, &start)?;
    trace.oracle_calls += 1;
    let z = point(&current);
    let mut mu = h.mu(&z)?;
    trace.steps.push(TraceStep {
        round: 0,
        target: TargetTag::Initial,
        target_distance: p.mu(&z)?,
        distance: mu,
        accepted: true,
    });
    while mu > 0 {
        match round(h, &current, &point, &mut solve, trace.rounds + 1, &mut trace)? {
            Some((y, _)) => {
                current = y;
                mu = h.mu(&point(&current))?;
                trace.rounds += 1;
            }
            None => break,
        }
    }
    Ok((current, mu, trace))
}
