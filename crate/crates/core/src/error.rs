use thiserror::Error;

pub type Result<T> = std::result::Result<T, NetspaceError>;

#[derive(Debug, Error)]
pub enum NetspaceError {
    /// A parameter outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid element id {id} (lattice has {len} elements)")]
    InvalidId { id: usize, len: usize },

    #[error("exact engine capped at {cap} elements (lattice has {len}); use heuristic engine")]
    ExactCapExceeded { len: usize, cap: usize },

    #[error("frequency radius {radius} aliases on a grid of size {grid}: need grid >= {}", 2 * radius + 1)]
    Aliasing { radius: usize, grid: usize },

    #[error("insufficient quadrature nodes: {given} given, {required} required")]
    InsufficientNodes { given: usize, required: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl NetspaceError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        NetspaceError::Domain(msg.into())
    }

    /// Short machine-readable tag, used by the CLI's JSON error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            NetspaceError::Domain(_) => "domain",
            NetspaceError::InvalidId { .. } => "invalid-id",
            NetspaceError::ExactCapExceeded { .. } => "exact-cap",
            NetspaceError::Aliasing { .. } => "aliasing",
            NetspaceError::InsufficientNodes { .. } => "insufficient-nodes",
            NetspaceError::Shape(_) => "shape",
            NetspaceError::InternalConsistency(_) => "internal-consistency",
            NetspaceError::Parse(_) => "parse",
            NetspaceError::Io(_) => "io",
            NetspaceError::Json(_) => "json",
            NetspaceError::Csv(_) => "csv",
        }
    }
}
