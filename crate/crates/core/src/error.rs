use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("block index {j} outside [-1, {jmax}]")]
    BlockIndex { j: i32, jmax: i32 },
    #[error("invalid `{field}`: {msg}")]
    Param { field: String, msg: String },
    #[error("time {t} outside [{lo}, {hi}]")]
    TimeRange { t: f64, lo: f64, hi: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no contraction after {splits} interval halvings; realized factors {factors:?}")]
    NonContraction { splits: usize, factors: Vec<f64> },
    #[error("inconsistent grids: {0}")]
    InconsistentGrids(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("output: {0}")]
    Output(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(field: &str, msg: impl Into<String>) -> Error {
    Error::Param {
        field: field.to_string(),
        msg: msg.into(),
    }
}
