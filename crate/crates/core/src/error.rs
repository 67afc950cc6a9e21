use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (non-positive
    /// photon number, indefinite weight, mismatched dimensions, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine did not reach its tolerance, or a matrix was too
    /// ill-conditioned to trust.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The Fock cutoff is too small for the requested state.
    #[error("precondition violated: {message} (need cutoff >= {required_cutoff})")]
    Cutoff {
        message: String,
        required_cutoff: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
