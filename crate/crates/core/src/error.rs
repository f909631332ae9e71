use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("block ({row}, {col}) has shape {found:?}, expected {expected:?}")]
    BlockShape {
        row: usize,
        col: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("I - W is numerically singular (||W|| = {w_norm:.6e}, condition estimate {condition:.3e})")]
    Singular { w_norm: f64, condition: f64 },

    #[error("matrix is not Hermitian within tolerance: ||M - M*|| = {defect:.3e} > {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("tuple does not commute: ||T{j}T{k} - T{k}T{j}|| = {defect:.3e} exceeds {tol:.3e}", j = .pair.0 + 1, k = .pair.1 + 1)]
    NonCommuting {
        pair: (usize, usize),
        defect: f64,
        tol: f64,
    },

    #[error("index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
