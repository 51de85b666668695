use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),
    #[error("intensity x must be positive, got {0}")]
    NonPositiveIntensity(String),
    #[error("explicit scale s must be positive and finite")]
    NonPositiveScale,
    #[error("the zero polynomial is not a valid Hamiltonian")]
    ZeroPolynomial,
    #[error("term cap of {cap} reached before the truncation bound was met")]
    TermCapExceeded { cap: usize },
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("pole at k = {k}: |1 - P(k)*lambda| = {gap}")]
    Pole { k: usize, gap: String },
    #[error("invalid range [{min}, {max}]: need min < max")]
    InvalidRange { min: String, max: String },
    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI in its JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidTolerance(_) => "invalid_tolerance",
            Error::NonPositiveIntensity(_) => "non_positive_x",
            Error::NonPositiveScale => "non_positive_scale",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::TermCapExceeded { .. } => "cap_exceeded",
            Error::Divergent(_) => "divergence",
            Error::Pole { .. } => "pole",
            Error::InvalidRange { .. } => "invalid_range",
            Error::Precondition(_) => "precondition",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
