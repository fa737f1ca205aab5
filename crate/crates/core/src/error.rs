use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeconError {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("invalid symmetrization: {0}")]
    SymmetrizationInvalid(String),

    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("smoothing limit did not settle after {halvings} halvings (last change {last_change:.3e})")]
    SmoothingLimit { halvings: usize, last_change: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    #[error("lattice steps differ: {0} vs {1}")]
    StepMismatch(f64, f64),

    #[error("atom at {0} is not on the lattice")]
    AtomNotRepresentable(f64),

    #[error("{0}")]
    Range(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),
}

pub type Result<T, E = DeconError> = std::result::Result<T, E>;
