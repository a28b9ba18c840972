use thiserror::Error;

/// Failure modes shared by every model in the crate.
///
/// `Validation` and `Domain` are caller mistakes and map to exit code 2 in the
/// CLI; `Computation` means the numerics gave up and maps to exit code 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Validation { .. } | Error::Domain(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
