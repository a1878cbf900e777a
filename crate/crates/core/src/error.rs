use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point {x} lies outside [-{limit}, {limit}]")]
    Domain { x: f64, limit: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("non-finite normalization constant for degree {degree} (alpha = {alpha}, beta = {beta})")]
    Overflow { degree: usize, alpha: f64, beta: f64 },

    #[error("non-finite design matrix entry at row {row}, column {col}")]
    Assembly { row: usize, col: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("non-finite function value at x = {x}")]
    Evaluation { x: f64 },

    #[error("wrong regime: {0}")]
    Regime(String),

    #[error("fit window: {0}")]
    Window(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, FrameError>;
