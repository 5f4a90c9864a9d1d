//! Reachability from x0⁻ by reduction to perfect matchings.
//!
//! Choosing an edge set S with Σ_{e∈S} vec(e) = t is an exact degree
//! problem: give a⁺b⁺ edges "in iff chosen", a⁻b⁻ edges "in iff not chosen",
//! and split a⁺b⁻ through a new vertex of degree one. The empty set gives
//! the base factor f₀ (degree = number of minus ends); the targets x0⁻v^β
//! change f₀ by one at x0 and at v.
//!
//! In Tutte's gadget every factor vertex v gets one outer copy per
//! half-edge and D(v) − f(v) inner copies joined to all its outer copies.
//! The base factor gives an explicit perfect matching M₀. Adding an inner
//! copy r at x0 leaves r as the only free vertex, and one blossom search
//! from r decides every target at once:
//!   v ∈ V⁺  iff an inner copy of v is even (G₀ + r − inner has a p.m.);
//!   v ∈ V⁻  iff an outer copy of v is even (G₀ + r + inner augments).
//! Witnesses come from one augmentation on the modified gadget.

use crate::blossom::{Blossom, NONE};
use crate::error::{internal, Result};
use crate::graph::{EdgeId, Vertex};

use super::{open_chain, BidirectedGraph, Sign};

#[derive(Clone, Copy)]
enum Role {
    /// Factor edge for a non-mixed edge; chosen iff in == `chosen_if_in`.
    Direct { chosen_if_in: bool },
    /// The plus half a–w of a mixed edge a⁺b⁻; chosen iff in.
    MixedPlus,
    /// The minus half w–b; carries no decision of its own.
    MixedMinus,
}

struct FactorEdge {
    origin: EdgeId,
    role: Role,
}

pub(crate) struct Reach<'a> {
    bg: &'a BidirectedGraph,
    x0: Vertex,
    fedges: Vec<FactorEdge>,
    outer_at: Vec<Vec<usize>>,
    inner_at: Vec<Vec<usize>>,
    adj: Vec<Vec<usize>>,
    mate0: Vec<usize>,
    root: usize,
    spare: usize,
}

impl<'a> Reach<'a> {
    pub fn new(bg: &'a BidirectedGraph, x0: Vertex) -> Self {
        let n = bg.n();
        // factor graph: (a, b, base_in)
        let mut fvert = n;
        let mut ends: Vec<(usize, usize, bool)> = Vec::new();
        let mut fedges = Vec::new();
        for (id, e) in bg.edges().iter().enumerate() {
            match (e.su, e.sv) {
                (Sign::Plus, Sign::Plus) | (Sign::Minus, Sign::Minus) => {
                    let plus = e.su == Sign::Plus;
                    ends.push((e.u, e.v, !plus));
                    fedges.push(FactorEdge { origin: id, role: Role::Direct { chosen_if_in: plus } });
                }
                _ if e.is_loop() => {} // a⁺a⁻ sums to zero
                _ => {
                    let (a, b) = if e.su == Sign::Plus { (e.u, e.v) } else { (e.v, e.u) };
                    let w = fvert;
                    fvert += 1;
                    ends.push((a, w, false));
                    fedges.push(FactorEdge { origin: id, role: Role::MixedPlus });
                    ends.push((w, b, true));
                    fedges.push(FactorEdge { origin: id, role: Role::MixedMinus });
                }
            }
        }
        let mut outer_at: Vec<Vec<usize>> = vec![Vec::new(); fvert];
        let mut free_at: Vec<Vec<usize>> = vec![Vec::new(); fvert];
        let mut total = 2 * ends.len();
        let mut edges_g: Vec<(usize, usize)> = Vec::new();
        let mut mate_pairs: Vec<(usize, usize)> = Vec::new();
        for (k, &(a, b, base_in)) in ends.iter().enumerate() {
            let (oa, ob) = (2 * k, 2 * k + 1);
            outer_at[a].push(oa);
            outer_at[b].push(ob);
            edges_g.push((oa, ob));
            if base_in {
                mate_pairs.push((oa, ob));
            } else {
                free_at[a].push(oa);
                free_at[b].push(ob);
            }
        }
        let mut inner_at: Vec<Vec<usize>> = vec![Vec::new(); fvert];
        for v in 0..fvert {
            for &o in &free_at[v] {
                let i = total;
                total += 1;
                inner_at[v].push(i);
                mate_pairs.push((i, o));
            }
            for &i in &inner_at[v] {
                for &o in &outer_at[v] {
                    edges_g.push((i, o));
                }
            }
        }
        let root = total;
        let spare = total + 1;
        total += 2;
        for &o in &outer_at[x0] {
            edges_g.push((root, o));
        }
        let mut adj = vec![Vec::new(); total];
        for &(a, b) in &edges_g {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut mate0 = vec![NONE; total];
        for &(a, b) in &mate_pairs {
            mate0[a] = b;
            mate0[b] = a;
        }
        Reach { bg, x0, fedges, outer_at, inner_at, adj, mate0, root, spare }
    }

    /// (V⁺, V⁻) as masks over the original vertices.
    pub fn labels(&self) -> Result<(Vec<bool>, Vec<bool>)> {
        let mut b = Blossom::new(self.adj.clone());
        b.mate = self.mate0.clone();
        let l = b.label(&[self.root]).map_err(|_| internal("base matching is not perfect"))?;
        let n = self.bg.n();
        let plus = (0..n)
            .map(|v| v == self.x0 || self.inner_at[v].first().is_some_and(|&i| l.even[i]))
            .collect();
        let minus = (0..n).map(|v| self.outer_at[v].iter().any(|&o| l.even[o])).collect();
        Ok((plus, minus))
    }

    /// An ordered (x0⁻, v^β) path; errors if none exists.
    pub fn witness(&self, v: Vertex, beta: Sign) -> Result<Vec<EdgeId>> {
        if v == self.x0 && beta == Sign::Plus {
            return Ok(Vec::new());
        }
        let mut adj = self.adj.clone();
        let mut mate = self.mate0.clone();
        match beta {
            Sign::Plus => {
                let &i = self.inner_at[v].first().ok_or_else(|| internal("target not reachable"))?;
                for k in 0..adj[i].len() {
                    let o = adj[i][k];
                    adj[o].retain(|&x| x != i);
                }
                adj[i].clear();
                let o = mate[i];
                mate[o] = NONE;
                mate[i] = NONE;
            }
            Sign::Minus => {
                let j = self.spare;
                for &o in &self.outer_at[v] {
                    adj[j].push(o);
                    adj[o].push(j);
                }
            }
        }
        let mut b = Blossom::new(adj);
        b.mate = mate;
        if !b.augment_from(self.root) {
            return Err(internal("target not reachable"));
        }
        let mut chosen = Vec::new();
        for (k, fe) in self.fedges.iter().enumerate() {
            let is_in = b.mate[2 * k] == 2 * k + 1;
            let pick = match fe.role {
                Role::Direct { chosen_if_in } => is_in == chosen_if_in,
                Role::MixedPlus => is_in,
                Role::MixedMinus => false,
            };
            if pick {
                chosen.push(fe.origin);
            }
        }
        open_chain(self.bg, self.x0, &chosen)
    }
}
