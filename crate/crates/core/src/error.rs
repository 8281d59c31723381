use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid address {addr}: {reason}")]
    InvalidAddress { addr: String, reason: String },
    #[error("vertex at depth {depth} has no ancestor at distance {distance}")]
    NoSuchAncestor { depth: u32, distance: u32 },
    #[error("depth {requested} exceeds truncation depth {cap}")]
    DepthOverflow { requested: u32, cap: u32 },
    #[error("{what} needs {needed} elements, size guard is {limit}")]
    SizeGuard { what: &'static str, needed: u64, limit: u64 },
    #[error("vertex {0} is not special")]
    NotSpecial(String),
    #[error("coloring covers {got} vertices, target has {expected}")]
    CoverageGap { expected: u64, got: u64 },
    #[error("coloring domain does not match the target: {0}")]
    KeyMismatch(String),
    #[error("clique witness failed: {0}")]
    WitnessFailed(String),
    #[error("graph is not a rooted tree: {0}")]
    NotATree(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
