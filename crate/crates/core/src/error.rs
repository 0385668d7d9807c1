use std::io;

use thiserror::Error;

/// Errors raised while building codes or running simulations.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid construction or simulation parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation received input outside its domain (wrong length, zero divisor, ...).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("config file error: {0}")]
    ConfigFile(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
