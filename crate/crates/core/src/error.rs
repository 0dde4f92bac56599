use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation (y ≤ 0, r ≤ 0, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("determinant {det} is not 1 within tolerance")]
    Determinant { det: f64 },

    #[error("numerically singular Möbius denominator |cz+d| = {0:e}")]
    SingularDenominator(f64),

    #[error("radicand {value:e} negative in {curve}")]
    Radicand { curve: &'static str, value: f64 },

    #[error("{0} is singular (line parallel to the x-axis direction)")]
    SingularLine(&'static str),

    #[error("g_y = {g_y} outside the regime of {what}")]
    Regime { what: &'static str, g_y: f64 },

    #[error("iteration cap of {cap} exceeded in {what}")]
    IterationCap { what: &'static str, cap: usize },

    #[error("geometric degeneracy: {0}")]
    Degenerate(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// Quadrature did not reach the requested tolerance.
    #[error("accuracy not achieved: estimated error {achieved:e} > requested {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
