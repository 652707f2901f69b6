use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular (pivot {pivot:.3e} below {threshold:.3e})")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("matrix is not symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("linear pencil determinant vanishes identically")]
    DegeneratePencil,
    #[error("no shift candidate leaves the pencil invertible")]
    ShiftExhausted,
    #[error("value {0} is not an eigenvalue of the pencil")]
    NotAnEigenvalue(String),
    #[error("kernels of M and A intersect nontrivially")]
    PreconditionKerMA,
    #[error("mass matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    MassNotDefinite(f64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("derivative denominator vanishes ({0:.3e})")]
    DenominatorVanishes(f64),
    #[error("branch matching ambiguous at eta = {0}")]
    MatchingAmbiguous(f64),
    #[error("interval endpoints collide: {0}")]
    EnumerationAmbiguous(String),
    #[error("function vanishes on the contour after retries")]
    BoundaryZero,
    #[error("sqrt(q)*a/pi = {0} is not a positive integer")]
    PreconditionInteger(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
