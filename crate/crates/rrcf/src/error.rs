//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the symbolic and numeric pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// Inversion or leading-exponent query on a series with no known nonzero term.
    #[error("non-invertible: series is zero up to its truncation")]
    NonInvertible,

    /// A constructor was given arguments outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A linear solve found no relation; the truncation order was too small.
    #[error("truncation too small: nullspace is trivial at {rows} rows for {cols} unknowns")]
    TruncationTooSmall { rows: usize, cols: usize },

    /// A linear solve found more than one relation; the degree bounds are wrong.
    #[error("degree bound violated: nullspace dimension {dim} > 1")]
    DegreeBoundViolated { dim: usize },

    /// An inhomogeneous exact solve was inconsistent.
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),

    /// Total pole degree requested for a function with non-integer cusp orders.
    #[error("function is not modular on the group: order {order} at cusp {cusp} is not an integer")]
    NonIntegralOrder { cusp: String, order: String },

    /// Evaluation requested outside the upper half-plane.
    #[error("not in upper half-plane: im(tau) must be positive")]
    NotInUpperHalfPlane,

    /// |q| too close to 1 for the product to converge at the requested precision.
    #[error("convergence too slow; increase im or supply reduced point")]
    ConvergenceTooSlow,

    /// Class polynomial coefficients failed to round to integers.
    #[error("rounding residual {residual} exceeds tolerance after {retries} precision doublings")]
    RoundingFailed { residual: String, retries: u32 },

    /// Root selection could not separate candidate roots.
    #[error("root separation below tolerance; increase precision")]
    RootSeparation,

    /// Quadratic propagation hit a near-zero discriminant.
    #[error("discriminant near zero in quadratic root selection")]
    DegenerateQuadratic,

    /// Malformed textual input (series, spec or complex number).
    #[error("parse error: {0}")]
    Parse(String),

    /// Internal invariant breakage that should be unreachable.
    #[error("internal error: {0}")]
    Internal(String),
}
