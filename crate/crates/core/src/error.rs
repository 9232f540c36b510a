use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Violations of the algebraic properties being verified are *not* errors;
/// they are reported as data by the checkers. Errors are reserved for bad
/// configuration, malformed input and broken preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A ring descriptor that does not describe a commutative ring with 2 invertible.
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    /// Mismatched rings or shapes, out-of-range indices, unsupported operations.
    #[error("domain error: {0}")]
    Domain(String),
    /// A witness family or other input that does not satisfy the hypotheses it claims to.
    #[error("contract error: {0}")]
    Contract(String),
    /// Malformed JSON input.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        // serde_json appends " at line L column C" to data errors; keep the bare message.
        let full = err.to_string();
        let message = match full.rfind(" at line ") {
            Some(pos) => full[..pos].to_string(),
            None => full,
        };
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message,
        }
    }
}
