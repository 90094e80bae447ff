use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("edge endpoint {index} out of range for graph with {num_nodes} nodes")]
    IndexOutOfRange { index: usize, num_nodes: usize },
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),
    #[error("permutation is not a bijection on [0, {0})")]
    NotABijection(usize),
    #[error("graph already has a virtual node")]
    VirtualNodeAlreadyPresent,
    #[error("graph has no virtual node")]
    MissingVirtualNode,
    #[error("malformed record at line {line}: {msg}")]
    MalformedRecord { line: usize, msg: String },
    #[error("matrix is not symmetric within tolerance")]
    NotSymmetric,
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("diffusion time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("graph is disconnected; electrostatic potentials are undefined across components")]
    DisconnectedGraph,
    #[error("cycle length bound {0} outside supported range 3..=10")]
    KTooLarge(usize),
    #[error("PSE config selects no encodings")]
    EmptyConfig,
    #[error("operation requires a node-level PSE vector")]
    NotNodeLevel,
    #[error("initial coloring has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("graph with {0} nodes exceeds the exhaustive orbit-search bound of 16")]
    GraphTooLarge(usize),
    #[error("feature width {got} does not match expected width {expected}")]
    WidthMismatch { got: usize, expected: usize },
    #[error("alpha must lie strictly in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("bad CSL skip {0}: skips must be pairwise distinct and in [2, 20]")]
    BadSkip(usize),
    #[error("no {d}-regular graph on {n} nodes exists (n*d must be even and d < n)")]
    InfeasibleDegree { n: usize, d: usize },
    #[error("regular-graph sampler exhausted {0} retries")]
    RetriesExhausted(usize),
    #[error("verification failed: {0}")]
    VerdictFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
