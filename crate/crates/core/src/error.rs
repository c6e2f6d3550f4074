use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("segments belong to different cuspidals: {0}")]
    MixedCuspidal(String),
    #[error("densities are not proportional: {0}")]
    NotProportional(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
