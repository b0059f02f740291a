use thiserror::Error;

/// Errors raised by the laboratory.
///
/// The variants map one-to-one onto the process exit codes of the `ldl`
/// binary, so callers can tell a bad request apart from a violated proven
/// inequality.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LdlError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "cap too deep: delta {delta} exceeds the width {width} in direction ({theta_x}, {theta_y})"
    )]
    CapTooDeep {
        delta: f64,
        width: f64,
        theta_x: f64,
        theta_y: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl LdlError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            LdlError::InternalConsistency(_) => 2,
            LdlError::Resource(_) => 3,
            LdlError::Parse(_) => 64,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, LdlError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(LdlError::InvalidArgument(msg.into()))
}
