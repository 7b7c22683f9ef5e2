use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count {n} outside 1..={max}")]
    VertexCount { n: usize, max: usize },
    #[error("index {index} out of range for n={n}")]
    Range { index: usize, n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("arc set admits no acyclic ordering")]
    Cycle,
    #[error("slide endpoints must be distinct")]
    Identity,
    #[error("vertices {v} and {w} have different in-neighbor sets")]
    Sibling { v: usize, w: usize },
    #[error("size mismatch: {left} vs {right}")]
    Size { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("diagonal entry at {i} is nonzero")]
    Diagonal { i: usize },
    #[error("columns {i} and {j} differ")]
    ColumnMismatch { i: usize, j: usize },
    #[error("matrix is singular over Z2")]
    Singular,
    #[error("duplicate index {0} in index set")]
    DuplicateIndex(usize),
    #[error("record format: {0}")]
    Format(String),
    #[error("orbit exceeded member limit {limit}")]
    LimitExceeded { limit: usize },
    #[error("estimated {needed_mb} MB for the dedup store exceeds budget of {budget_mb} MB")]
    Resource { needed_mb: usize, budget_mb: usize },
}
