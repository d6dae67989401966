//! Error type shared by all bound calculators and estimators.

use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the library. Messages name the violated precondition so
/// callers (and the CLI) can surface them verbatim.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input fell outside an operation's stated domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Young-Fenchel supremum diverges on the search range.
    #[error("unbounded conjugate: sup_x(xy - phi(x)) diverges at y = {y}")]
    UnboundedConjugate { y: f64 },

    /// A moment generating function is infinite inside the requested range.
    #[error("heavy tail: MGF divergent at lambda = {lambda}")]
    HeavyTail { lambda: f64 },

    /// A norm that requires a centered variable was given a non-centered one.
    #[error("precondition error: model not centered (mean = {mean})")]
    NotCentered { mean: f64 },

    /// Plug-in MGF overflowed; the range must be narrowed.
    #[error("lambda range too wide: exponential overflow at lambda = {lambda}")]
    RangeTooWide { lambda: f64 },

    /// An operation requires `phi^(-1)(1) = 1` and the supplied phi is not
    /// normalized that way; rescale phi instead of relying on silent fixes.
    #[error("normalization error: phi^(-1)(1) = {inverse_at_one}, expected 1; rescale phi")]
    NotNormalized { inverse_at_one: f64 },

    /// A stated hypothesis of the bound under evaluation fails.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Exhaustive enumeration was refused because the instance is too large.
    #[error("refusing enumeration: size {size} exceeds limit {limit}")]
    TooLarge { size: u64, limit: u64 },

    /// A bisection hit its cap without bracketing a solution.
    #[error("divergence: {0}")]
    Divergence(String),

    /// No feasible constant exists in the calibration interval.
    #[error("calibration failed: no feasible value in [{lo}, {hi}]")]
    CalibrationFailed { lo: f64, hi: f64 },

    /// A campaign configuration could not be resolved.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
