use thiserror::Error;

use crate::lagrangian::LagrangianEstimate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid r-tuple {elems:?}: {reason}")]
    InvalidTuple {
        elems: Vec<u32>,
        reason: &'static str,
    },

    #[error("uniformity mismatch: {left} vs {right}")]
    UniformityMismatch { left: usize, right: usize },

    #[error("invalid uniformity r = {0} (need r >= 2)")]
    InvalidUniformity(usize),

    #[error("rank must be >= 1, got {0}")]
    InvalidRank(u64),

    #[error("vertex {vertex} outside [1, {n}]")]
    VertexOutOfRange { vertex: u32, n: u32 },

    #[error("vertices must be distinct (got {0} twice)")]
    RepeatedVertex(u32),

    #[error("invalid hypergraph: {0}")]
    InvalidGraph(String),

    #[error("graph is not left-compressed")]
    NotLeftCompressed,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid weighting: {0}")]
    InvalidWeighting(String),

    #[error("weighting has {got} coordinates, graph needs at least {need}")]
    LengthMismatch { got: usize, need: usize },

    #[error("shift would make coordinate {vertex} negative ({value})")]
    NegativeCoordinate { vertex: u32, value: f64 },

    #[error("graph has no edges; its Lagrangian is undefined here")]
    EmptyGraph,

    #[error("solver failed: {reason}")]
    SolverFailure {
        reason: String,
        partial: Option<Box<LagrangianEstimate>>,
    },

    #[error("lattice has {size} points, above the cap of {cap}")]
    LatticeTooLarge { size: u128, cap: u128 },

    #[error("enumeration guard: {0}")]
    EnumerationTooLarge(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
