use thiserror::Error;

/// Every fallible operation in the crate returns this error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} out of range for graph with {m} edges")]
    EdgeOutOfRange { edge: usize, m: usize },
    #[error("edge subset has length {got}, expected {expected}")]
    SubsetLength { got: usize, expected: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration over {edges} edges exceeds the limit of {limit}")]
    EnumerationLimit { edges: usize, limit: usize },
    #[error("empty set is not a sponge")]
    EmptySponge,
    #[error("negative value {0} in sponge")]
    NegativeValue(i64),
    #[error("not a sponge: gap of length {gap} after {after}")]
    NotASponge { after: i64, gap: i64 },
    #[error("sponge at coordinate {0} is not an interval or parity set")]
    NotClassical(usize),
    #[error("sponge at coordinate {0} is not a parity set")]
    NotParity(usize),
    #[error("vertex {vertex}: lower bound {l} exceeds upper bound {u}")]
    InvertedBounds { vertex: usize, l: i64, u: i64 },
    #[error("vertex {vertex}: parity bounds {l} and {u} differ in parity")]
    ParityMismatch { vertex: usize, l: i64, u: i64 },
    #[error("vertex {vertex}: upper bound {u} exceeds degree {degree}")]
    BoundExceedsDegree { vertex: usize, u: i64, degree: i64 },
    #[error("vertex {vertex}: no admissible value within [0, {degree}]")]
    EmptyAfterClamp { vertex: usize, degree: i64 },
    #[error("component containing vertex {0} has an odd number of terminals")]
    OddComponent(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("weighting is not conservative")]
    NotConservative,
    #[error("weights must be +1 or -1, got {0}")]
    BadWeight(i64),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("bipartition cannot be balanced")]
    Unbalanced,
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    MatrixIndex { row: usize, col: usize, rows: usize, cols: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("edge {edge} is not incident to vertex {vertex}")]
    NotIncident { edge: usize, vertex: usize },
    #[error("vertices {u} and {v} are not adjacent")]
    NotAdjacent { u: usize, v: usize },
    #[error("sets L and U overlap at vertex {0}")]
    Overlap(usize),
    #[error("matching is not maximum")]
    NotMaximum { augmenting_path: Vec<usize> },
    #[error("edge set is not a matching")]
    NotAMatching,
    #[error("not a jump system: {0}")]
    NotJumpSystem(String),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("oracle does not support membership queries")]
    NoMembership,
    #[error("point is not a member of the jump system")]
    NotMember,
    #[error("zero trials requested")]
    ZeroTrials,
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad user input (as opposed to infeasibility
    /// or internal failure).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::VertexOutOfRange { .. }
                | Error::EdgeOutOfRange { .. }
                | Error::SubsetLength { .. }
                | Error::DimensionMismatch { .. }
                | Error::EmptySponge
                | Error::NegativeValue(_)
                | Error::NotASponge { .. }
                | Error::NotClassical(_)
                | Error::NotParity(_)
                | Error::InvertedBounds { .. }
                | Error::ParityMismatch { .. }
                | Error::BadWeight(_)
                | Error::EmptyPointSet
                | Error::NotJumpSystem(_)
                | Error::ZeroTrials
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
