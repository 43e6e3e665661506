//! Error type shared by all solver and construction routines.

use thiserror::Error;

/// Failure modes of grid construction, coefficient validation, and solves.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// A caller-supplied argument is structurally invalid (bad sizes, bad
    /// parameter ranges, unknown family names, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two objects that must live on the same grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A quantitative precondition failed; carries the measured value and the
    /// limit it violated.
    #[error("precondition violated: {what} = {value:.3e} exceeds limit {limit:.3e}")]
    PreconditionViolated {
        what: String,
        value: f64,
        limit: f64,
    },

    /// An iterative solve stopped without reaching its tolerance.
    #[error("solver failure in {what}: relative residual {residual:.3e} after {iterations} iterations")]
    SolverFailure {
        what: String,
        residual: f64,
        iterations: usize,
    },

    /// A pointwise numerical operation degenerated (singular matrix sample,
    /// non-elliptic quadratic form, ...).
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// Neumann-type data violates the required compatibility condition.
    #[error("compatibility violation: {what} has mean {value:.3e}, limit {limit:.3e}")]
    Incompatible {
        what: String,
        value: f64,
        limit: f64,
    },
}

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidArgument(msg.into())
    }

    pub fn grid(msg: impl Into<String>) -> Self {
        CoreError::GridMismatch(msg.into())
    }
}
