use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("power iteration did not converge after {iterations} iterations (last estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },

    #[error(
        "fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    EquilibriumNotConverged {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("enumerating {products} products exceeds the budget of {cap}; use a smaller depth")]
    Budget { products: u128, cap: u128 },

    #[error("enumeration time budget exhausted at depth {depth}")]
    TimeBudget { depth: usize },

    #[error("{0}")]
    Contract(String),

    #[error("probability {value} at node {node} left [0, 1]")]
    OutOfRange { node: usize, value: f64 },
}

impl Error {
    /// Numeric and resource failures, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::EquilibriumNotConverged { .. }
                | Error::Budget { .. }
                | Error::TimeBudget { .. }
                | Error::OutOfRange { .. }
        )
    }
}
