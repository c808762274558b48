//! Error type shared by all solver and evaluation routines.

/// Errors produced by incentive evaluation, integration, and the solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The optimal control is not uniquely determined at this state
    /// (trivial incentive with vanishing costate).
    #[error("degenerate control: {0}")]
    Degenerate(String),

    /// The requested operation is not defined for this incentive kind.
    #[error("unsupported incentive: {0}")]
    Unsupported(String),

    /// A residual scan found no sign change, so no root can be bracketed.
    #[error("no solution in bracket: {0}")]
    NoBracket(String),

    /// The adaptive integrator exhausted its step budget.
    #[error("step limit exhausted at t = {t}")]
    StepLimit { t: f64 },

    /// A non-finite value was produced where a finite one is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// An iterative routine failed to converge within its iteration budget.
    #[error("iteration limit exhausted in {0}")]
    IterationLimit(String),

    /// A diagnostic needs more samples than the trajectory provides.
    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
