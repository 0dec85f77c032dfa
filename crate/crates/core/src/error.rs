use thiserror::Error;

/// Errors raised by covariance-matrix algebra and the quantities built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state is not physical: smallest symplectic eigenvalue {nu_minus} < 1 - {tol}")]
    Unphysical { nu_minus: f64, tol: f64 },

    #[error("matrix is not symplectic: {0}")]
    InvalidTransform(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("optimizer failure: {0}")]
    Optimizer(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Unphysical { .. } | Error::InvalidTransform(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
