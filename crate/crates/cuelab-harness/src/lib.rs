//! Experiment harness around `cuelab`: reproducible configured runs that
//! compare exact Toeplitz determinants, Monte Carlo, and closed-form
//! predictors, plus the statistical machinery to score them.

pub mod config;
pub mod corpus;
pub mod experiments;
pub mod report;
pub mod stats;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown experiment: {0}")]
    UnknownExperiment(String),
    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
    #[error("corpus line {line}: {message}")]
    CorpusParse { line: usize, message: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Cuelab(#[from] cuelab::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn io_err(path: &std::path::Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}
