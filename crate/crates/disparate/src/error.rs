use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown color {0:?}")]
    UnknownColor(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("duplicate vertex token {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate color token {0:?}")]
    DuplicateColor(String),
    #[error("point set is not contained in the required graph: {0}")]
    PointsOutOfGraph(String),
    #[error("set must be nonempty: {0}")]
    EmptySet(String),
    #[error("set {0} is not within the required domain {1}")]
    OutOfDomain(String, String),
    #[error("not a cascade: step {index} is contained in neither its predecessor nor the complement")]
    NotACascade { index: usize },
    #[error("cascade index {index} out of range (valid 0..={max})")]
    CascadeIndex { index: usize, max: usize },
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("graph is not transitive (witness {x:?}-{y:?}-{z:?} with {x:?}-{z:?} missing)")]
    NotTransitive { x: String, y: String, z: String },
    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),
    #[error("invalid sudoku grid: {0}")]
    InvalidGrid(String),
    #[error("invalid selection: vertex {0:?} maps outside its domain")]
    InvalidSelection(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
