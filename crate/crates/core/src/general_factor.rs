//! Minimum-deficiency general factors: the degree of every vertex should lie
//! in a sponge. Each round solves the classical problem for the environment
//! of the current degree vector and for each of its escapes.

use serde::Serialize;

use crate::bidirected::classical_deficiency_from;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSubset, Graph, Vertex};
use crate::reduction;
pub use crate::reduction::{call_bound, ReductionTrace, TargetTag, TraceStep};
use crate::sponge::{ClassicalSpec, SpongeVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralFactor {
    pub factor: EdgeSubset,
    pub degrees: Vec<i64>,
    pub deficiency: u64,
    pub trace: ReductionTrace,
}

fn check(g: &Graph, h: &SpongeVector) -> Result<()> {
    if h.dim() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: h.dim() });
    }
    Ok(())
}

/// Parity oracle: optimum of a parity target, warm-started from `from`.
fn parity_solve(g: &Graph, target: &SpongeVector, from: &EdgeSubset) -> Result<EdgeSubset> {
    let spec = ClassicalSpec::from_sponges(target)?;
    Ok(classical_deficiency_from(g, &spec, from)?.factor)
}

fn degrees(g: &Graph, f: &EdgeSubset) -> Vec<i64> {
    g.degree_vector(f).expect("subset has the graph's length").0
}

/// μ(d_F(a), H(a)) ≠ 0 and flipping e does not increase it.
pub fn is_elementary(g: &Graph, h: &SpongeVector, f: &EdgeSubset, e: EdgeId, a: Vertex) -> Result<bool> {
    check(g, h)?;
    g.check_subset(f)?;
    let (x, y) = g.endpoints(e)?;
    g.check_vertex(a)?;
    if x != a && y != a {
        return Err(Error::NotIncident { edge: e, vertex: a });
    }
    let d = degrees(g, f)[a];
    let step = if g.is_loop(e) { 2 } else { 1 };
    let after = if f.contains(e) { d - step } else { d + step };
    let before = h.0[a].dist(d);
    Ok(before != 0 && h.0[a].dist(after) <= before)
}

/// One improving round; `None` certifies that F is optimal.
pub fn improve_round(g: &Graph, h: &SpongeVector, f: &EdgeSubset) -> Result<Option<(EdgeSubset, TargetTag)>> {
    check(g, h)?;
    g.check_subset(f)?;
    if h.mu(&degrees(g, f))? == 0 {
        return Ok(None);
    }
    let mut trace = ReductionTrace::default();
    reduction::round(
        h,
        f,
        &|f: &EdgeSubset| degrees(g, f),
        &mut |t: &SpongeVector, from: &EdgeSubset| parity_solve(g, t, from),
        1,
        &mut trace,
    )
}

/// Minimum of μ(d_F, H) over all F ⊆ E, with the optimal F.
pub fn general_factor_deficiency(g: &Graph, h: &SpongeVector) -> Result<GeneralFactor> {
    check(g, h)?;
    let (factor, deficiency, trace) = reduction::minimize(
        h,
        EdgeSubset::empty(g.m()),
        |f: &EdgeSubset| degrees(g, f),
        |t: &SpongeVector, from: &EdgeSubset| parity_solve(g, t, from),
    )?;
    let degrees = degrees(g, &factor);
    Ok(GeneralFactor { factor, degrees, deficiency, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sponge::Sponge;

    fn nine() -> (Graph, SpongeVector) {
        let g = Graph::new(2, vec![(0, 1); 9]).unwrap();
        let h = SpongeVector(vec![
            Sponge::new(vec![0, 1, 3, 5, 7, 9]).unwrap(),
            Sponge::new(vec![2, 4, 6, 8]).unwrap(),
        ]);
        (g, h)
    }

    #[test]
    fn nine_parallel() {
        let (g, h) = nine();
        let out = general_factor_deficiency(&g, &h).unwrap();
        assert_eq!(out.deficiency, 1);
        assert!(out.trace.oracle_calls <= call_bound(2));
        assert_eq!(improve_round(&g, &h, &EdgeSubset::full(9)).unwrap(), None);
        let (_, tag) = improve_round(&g, &h, &EdgeSubset::empty(9)).unwrap().unwrap();
        // The environment {0} x {2,..,8} cannot beat μ = 2; the upper escape at a can.
        assert_eq!(tag, TargetTag::Escape { vertex: 0, direction: crate::sponge::Direction::Upper });
    }

    #[test]
    fn escape_distances_in_nine_parallel() {
        let (_, h) = nine();
        let esc = h.escapes(&[9, 9]).unwrap();
        assert_eq!(esc.len(), 1);
        assert_eq!(esc[0].coord, 0);
        assert_eq!(esc[0].direction, crate::sponge::Direction::Lower);
        assert_eq!(esc[0].sponge.mu(&[9, 9]).unwrap(), 10);
        assert_eq!(esc[0].sponge.mu(&[1, 1]).unwrap(), 2);
    }

    #[test]
    fn subdivided_nine_parallel() {
        let (g, h) = nine();
        let (s, _) = g.subdivide();
        let mut hs = h.0.clone();
        hs.extend((0..9).map(|_| Sponge::new(vec![0, 2]).unwrap()));
        let out = general_factor_deficiency(&s, &SpongeVector(hs)).unwrap();
        assert_eq!(out.deficiency, 1);
    }

    #[test]
    fn triangle_all_ones() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let h = SpongeVector(vec![Sponge::singleton(1).unwrap(); 3]);
        assert_eq!(general_factor_deficiency(&g, &h).unwrap().deficiency, 1);
    }

    #[test]
    fn elementary_changes() {
        let (g, h) = nine();
        assert!(!is_elementary(&g, &h, &EdgeSubset::full(9), 0, 0).unwrap());
        let k2 = Graph::new(2, vec![(0, 1)]).unwrap();
        let h0 = SpongeVector(vec![Sponge::singleton(0).unwrap(); 2]);
        assert!(is_elementary(&k2, &h0, &EdgeSubset::full(1), 0, 0).unwrap());
        let lp = Graph::new(2, vec![(0, 0)]).unwrap();
        let h1 = SpongeVector(vec![Sponge::singleton(1).unwrap(); 2]);
        assert!(is_elementary(&lp, &h1, &EdgeSubset::full(1), 0, 0).unwrap());
        assert!(matches!(
            is_elementary(&lp, &h1, &EdgeSubset::full(1), 0, 1),
            Err(Error::NotIncident { .. })
        ));
    }
}
