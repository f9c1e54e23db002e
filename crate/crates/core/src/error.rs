use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has non-finite weight {w}")]
    NonFiniteWeight { u: usize, v: usize, w: f64 },
    #[error("unknown graph kind `{0}`")]
    UnknownGraphKind(String),
    #[error("matrix is not square: {len} entries for dimension {n}")]
    NotSquare { n: usize, len: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFiniteEntry(usize, usize),
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps (block end {index})")]
    NoConvergence { index: usize, sweeps: usize },
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("n = {n} is below the validity threshold n0 = {n0}")]
    BelowThreshold { n: usize, n0: usize },
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    AboveCap { n: usize, cap: usize },
    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
