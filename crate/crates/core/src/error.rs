use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("decomposition was built for graph {expected}, not {found}")]
    GraphMismatch { expected: String, found: String },

    #[error("decomposition has no nodes")]
    EmptyDecomposition,

    #[error("tree node {0} does not exist")]
    UnknownNode(usize),

    #[error("decomposition is not rooted")]
    NotRooted,

    #[error("{what}: {size} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has no cycle")]
    NoCycle,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("cycle is not geodesic")]
    NotGeodesic,

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("not a bramble: {0}")]
    NotABramble(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
