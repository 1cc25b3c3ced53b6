use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a dimension-0 diagram has no boundary")]
    BoundaryOfDot,

    #[error("child of a {parent}-diagram has dimension {child}")]
    ChildDimension { parent: usize, child: usize },

    #[error("cell dimension {requested} exceeds diagram dimension {dim}")]
    CellDimension { requested: usize, dim: usize },

    #[error("invalid cell address {0}")]
    InvalidAddress(String),

    #[error("labelling is not total: {0}")]
    LabelCount(String),

    #[error("label of {addr} has dimension {found}, expected {expected}")]
    LabelDimension { addr: String, expected: usize, found: usize },

    #[error("labels are not boundary-compatible at {0}")]
    Incompatible(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid bounds: {0}")]
    Bounds(String),

    #[error("stage mismatch: expected {expected}, found {found}")]
    Stage { expected: String, found: String },

    #[error("not an operad: {0}")]
    NotOperad(String),

    #[error("unknown generator {0}")]
    UnknownGenerator(usize),

    #[error("target structure is not receptive: {0}")]
    NotReceptive(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
