use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{n} vertices exceeds the configured capacity of {max}")]
    CapacityExceeded { n: usize, max: usize },
    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("header declares {declared} edges but {found} were read")]
    EdgeCount { declared: usize, found: usize },
    #[error("missing header line")]
    MissingHeader,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("part count must be at least 1")]
    ZeroParts,
    #[error("brute force needs {r}^{n} assignments, above the 10^8 guard")]
    GuardExceeded { n: usize, r: usize },
    #[error("at most {max} classes are supported, got {got}")]
    TooManyClasses { got: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("part count must be at least {min}, got {got}")]
    BadPartCount { got: usize, min: usize },
    #[error("alpha must be positive and finite, got {0}")]
    BadAlpha(f64),
    #[error("part {part} would have negative size {size}")]
    NegativeSize { part: String, size: f64 },
    #[error("deficit {t} outside 0..={max}")]
    DeficitOutOfRange { t: u64, max: u64 },
    #[error("expected {expected} sizes, got {got}")]
    SizeCount { expected: usize, got: usize },
    #[error("generated graph contains a K_{size} at {witness:?}")]
    NotCliqueFree { size: usize, witness: Vec<usize> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("graph contains K_{size}: {witness:?}")]
    ContainsClique { size: usize, witness: Vec<usize> },
    #[error("part count must be at least 1")]
    ZeroParts,
    #[error("refinement stopped at stage {0:?} and fallback is disabled")]
    StageFailed(crate::pipeline::Stage),
}
