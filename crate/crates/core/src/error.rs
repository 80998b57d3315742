use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole in {context}")]
    Pole { context: String },

    #[error("no sign change of {condition} in [{lo_nm:.3}, {hi_nm:.3}] nm")]
    NotFound {
        condition: &'static str,
        lo_nm: f64,
        hi_nm: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: result {result}, error estimate {estimate:e}")]
    Convergence { result: String, estimate: f64 },

    #[error("unphysical rates: |gamma_c| = {gamma_c:e} exceeds gamma_s = {gamma_s:e}")]
    Physicality { gamma_s: f64, gamma_c: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pole(context: impl Into<String>) -> Self {
        Error::Pole {
            context: context.into(),
        }
    }
}
