use thiserror::Error;

/// Errors raised by the bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeilError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative step did not reach its target accuracy.
    #[error("numerical failure in {stage} after {iterations} iterations (last residual {residual:e}, bracket [{lo}, {hi}])")]
    NumericalFailure {
        stage: &'static str,
        iterations: usize,
        residual: f64,
        lo: f64,
        hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, WeilError>;

pub(crate) fn invalid(msg: impl Into<String>) -> WeilError {
    WeilError::InvalidArgument(msg.into())
}
