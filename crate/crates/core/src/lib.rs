//! Degree-constrained subgraph problems with their min-max certificates.
//!
//! The crate covers maximum matchings and Tutte–Berge barriers, randomized
//! perfect-matching tests over a prime field, minimum T-joins with the
//! structure of conservative ±1 weightings, reachability in bidirected
//! graphs, classical (interval/parity) factors with a Tutte-type cut, the
//! general factor problem for sponges, and sponge-distance minimization over
//! jump systems given through a parity oracle.

pub mod algebraic;
pub mod bidirected;
mod blossom;
pub mod cli;
pub mod error;
pub mod general_factor;
pub mod graph;
pub mod io;
pub mod jump;
pub mod matching;
pub mod oracle;
mod reduction;
pub mod selftest;
pub mod sponge;
pub mod tjoin;

pub use error::{Error, Result};
pub use graph::{DegreeVector, EdgeId, EdgeSubset, Graph, Vertex};
pub use sponge::{ClassicalSpec, Sponge, SpongeVector};
