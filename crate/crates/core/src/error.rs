use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("subgradient validity violated: {0}")]
    Validity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("trace feasibility violated: {0}")]
    Feasibility(String),

    #[error("numerical failure: {message}")]
    Numerical { message: String, diagnostics: String },

    #[error("certificate inconsistency: {0}")]
    CertificateInconsistency(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl std::fmt::Display, got: impl std::fmt::Display) -> Self {
        Error::Shape(format!("expected {expected}, got {got}"))
    }

    /// True for failures caused by the numerics rather than the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical { .. } | Error::CertificateInconsistency(_)
        )
    }
}
