use thiserror::Error;
use tropical::TropicalError;

/// Errors raised by word generation, matrix construction and the solvers.
#[derive(Debug, Error)]
pub enum CylinderError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large: {what} would need about {required_bytes} bytes")]
    Capacity { what: String, required_bytes: u128 },

    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

impl CylinderError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CylinderError::InvalidArgument(msg.into())
    }
}
