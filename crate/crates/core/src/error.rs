use alloc::string::String;

/// Errors raised by the approximation toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{what} overflows f64 (log-scale value {log_value})")]
    Range { what: &'static str, log_value: f64 },
    #[error("eigenvalue iteration did not converge for index {index} after {iterations} sweeps")]
    NoConvergence { index: usize, iterations: usize },
    #[error("degenerate recurrence: vanishing coefficient at index {index}")]
    DegenerateRecurrence { index: usize },
    #[error("point outside the upper hemisphere: last coordinate {last} <= {tolerance}")]
    HemisphereDomain { last: f64, tolerance: f64 },
    #[error("point budget exceeded: {requested} points requested, cap is {cap}")]
    Budget { requested: u128, cap: u128 },
    #[error("sparsification failed: best moment residual {residual:e}")]
    Sparsification { residual: f64 },
    #[error("density too peaked for rejection sampling (acceptance {acceptance:e})")]
    DensityTooPeaked { acceptance: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("degenerate dataset: every quadrature point lies outside the admissible cap")]
    DegenerateDataset,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Parameter {
        name,
        value,
        reason,
    }
}
