use thiserror::Error;

/// Failures raised by parameter validation and by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("h(r) diverges as r -> 0 (pole coefficient {pole:.3e}); prefactor parameter or mixing coefficient is inconsistent")]
    Singularity { pole: f64 },

    #[error("degenerate quantity: {0}")]
    Degenerate(String),

    #[error("trial weight does not decay on [r0, r0 + 20]; cannot place r_max")]
    NoDecay,

    #[error("grid needs at least 64 points and an even interval count, got {0} points")]
    BadGrid(usize),

    #[error("floating-point overflow in {0}; r_max too large or too few grid points")]
    Overflow(&'static str),

    #[error("could not bracket the lowest eigenvalue")]
    Bracket,

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
