use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("expected a {expected}x{expected} matrix, got {actual}x{actual}")]
    WrongDimension { expected: usize, actual: usize },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("support of the first state is not contained in the support of the second")]
    SupportViolation,

    #[error("matrix is singular (smallest eigenvalue {0:.3e})")]
    SingularState(f64),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("non-physical spectrum: eigenvalue {0:.3e}")]
    NonPhysicalSpectrum(f64),

    #[error("solver did not converge after {iterations} iterations (value {value:.9})")]
    NotConverged { iterations: usize, value: f64 },

    #[error("Kraus set is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("curve family {kind} is not defined in the {plane} plane")]
    UnsupportedPair { kind: String, plane: String },

    #[error("{} record(s) violate the {plane} envelope", offending.len())]
    ContainmentViolation { plane: String, offending: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
