use thiserror::Error;

/// Errors raised by samplers, evaluators and the command line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A theorem hypothesis (e.g. a positive Hoeffding margin) does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A perturber returned a vector outside its declared l-inf budget.
    #[error("perturbation outside budget: ||delta||_inf = {norm} > eps = {eps}")]
    BudgetViolation { norm: f64, eps: f64 },

    /// Input sits exactly on a decision boundary the classifier refuses to resolve.
    #[error("input on decision boundary at coordinate {0}")]
    Boundary(usize),

    #[error("exact evaluation unsupported: {0}")]
    UnsupportedExact(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
