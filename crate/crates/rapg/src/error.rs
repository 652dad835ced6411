//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// Array dimensions do not match the manifold shape.
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// Coordinates violate the point invariants (unit-norm columns).
    InvalidPoint(String),
    /// Vector violates the tangency invariant at its base point.
    InvalidTangent(String),
    /// The connecting geodesic is not unique; log/transport are undefined.
    AntipodalPoints,
    /// Two points or vectors live on different manifolds.
    ManifoldMismatch,
    /// Argument outside the mathematical domain of the operation.
    DomainError(String),
    /// Inputs to the sectional-curvature formula are not orthonormal.
    NotOrthonormal,
    /// Points are not in the same (closed) orthant, or coincide.
    NotSameOrthant,
    /// Solver parameters violate an admissibility inequality.
    InvalidParams(String),
    /// Inner solver could not certify descent on the working ball.
    NonConvexBall(String),
    /// Grid oracle is restricted to tangent dimension <= 3.
    DimensionTooLarge { dim: usize, max: usize },
    /// Lipschitz escalation exceeded the hard cap; the model is defective.
    LEscalationDiverged { l: f64, cap: f64 },
    /// Too few trace points for a slope fit.
    InsufficientTail { points: usize, needed: usize },
    /// Some fitted objective value does not exceed the reference minimum.
    NonPositiveGap,
    /// Reference-minimum search did not reach the requested residual.
    NotConverged(String),
    /// Invalid user input (CLI flags, config keys, preconditions).
    InvalidInput(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { expected, got } => {
                write!(
                    f,
                    "shape mismatch: expected {}x{}, got {}x{}",
                    expected.0, expected.1, got.0, got.1
                )
            }
            Error::InvalidPoint(msg) => write!(f, "invalid manifold point: {msg}"),
            Error::InvalidTangent(msg) => write!(f, "invalid tangent vector: {msg}"),
            Error::AntipodalPoints => write!(f, "points are antipodal; geodesic is not unique"),
            Error::ManifoldMismatch => write!(f, "operands live on different manifolds"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::NotOrthonormal => write!(f, "vectors are not orthonormal"),
            Error::NotSameOrthant => write!(f, "points are not in the same orthant or coincide"),
            Error::InvalidParams(msg) => write!(f, "invalid solver parameters: {msg}"),
            Error::NonConvexBall(msg) => write!(f, "inner solve failed to certify descent: {msg}"),
            Error::DimensionTooLarge { dim, max } => {
                write!(f, "tangent dimension {dim} exceeds grid-oracle limit {max}")
            }
            Error::LEscalationDiverged { l, cap } => {
                write!(f, "Lipschitz estimate {l:.3e} exceeded hard cap {cap:.3e}")
            }
            Error::InsufficientTail { points, needed } => {
                write!(f, "slope fit needs {needed} tail points, found {points}")
            }
            Error::NonPositiveGap => write!(f, "objective gap is non-positive on the fitted tail"),
            Error::NotConverged(msg) => write!(f, "not converged: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
