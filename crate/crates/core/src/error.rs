use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside the domain of its owning type.
    #[error("{field} = {value} outside allowed range {allowed}")]
    Parameter {
        field: &'static str,
        value: f64,
        allowed: &'static str,
    },
    #[error("sample is empty")]
    EmptySample,
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("sample matrix is singular (|det| = {det:e} <= tolerance {tol:e})")]
    SingularSampleMatrix { det: f64, tol: f64 },
    #[error("no jump detected")]
    NoJump,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn param(field: &'static str, value: impl num_traits::ToPrimitive, allowed: &'static str) -> Self {
        Error::Parameter {
            field,
            value: value.to_f64().unwrap_or(f64::NAN),
            allowed,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
