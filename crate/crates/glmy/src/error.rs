use thiserror::Error;

/// Errors produced by graph ingestion, basis enumeration and the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("self-edge `{label}->{label}` at line {line}")]
    SelfEdge { label: String, line: usize },

    #[error("digraph contains a directed cycle: {}", witness.join(" -> "))]
    Cycle { witness: Vec<String> },

    #[error("empty graph: no vertices")]
    EmptyGraph,

    #[error("unknown vertex `{label}` referenced by an edge")]
    UnknownVertex { label: String },

    #[error("size guard: {what} needs {requested} regular paths, cap is {cap}")]
    SizeGuard {
        what: String,
        requested: String,
        cap: u64,
    },

    #[error("path of length {len} exceeds the encoding width d = {max}")]
    PathTooLong { len: usize, max: usize },

    #[error("irregular path: equal consecutive vertices at position {position}")]
    IrregularPath { position: usize },

    #[error("vertex {vertex} repeats along the path; the register encoding holds one order value per vertex")]
    RepeatedVertex { vertex: u32 },

    #[error("vertex index {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("bitstring is not a path state: {reason}")]
    NonPathBitstring { reason: String },

    #[error("degree {degree} out of range, top degree is {top}")]
    DegreeOutOfRange { degree: usize, top: usize },

    #[error("Hodge decomposition failed at degree {degree}: gamma = {gamma}, kernel = {kernel}, image = {image}, coimage = {coimage}")]
    Decomposition {
        degree: usize,
        gamma: usize,
        kernel: usize,
        image: usize,
        coimage: usize,
    },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
