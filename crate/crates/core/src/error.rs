use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("not a density operator: {0}")]
    NotDensity(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("witness check failed: {0}")]
    Witness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
