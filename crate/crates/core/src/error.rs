use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 2")]
    Dimension(usize),

    #[error("invalid direction: {0}")]
    Direction(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("invalid data: {0}")]
    Data(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid family spec `{spec}`: {reason}")]
    FamilySpec { spec: String, reason: String },

    #[error("point outside the unit cube: {0}")]
    OutsideUnitCube(String),

    #[error("integration did not reach target error: estimated {estimated:.3e} > target {target:.3e}")]
    Integration { estimated: f64, target: f64 },

    #[error("{what} needs at most {limit} dimensions, got {d}")]
    TooManyDimensions { what: &'static str, d: usize, limit: usize },

    #[error("{0} overflows 128-bit integers")]
    Overflow(&'static str),

    #[error("invalid plan: {0}")]
    Plan(String),

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: row {row}, column {column}: {reason}")]
    Cell {
        path: PathBuf,
        row: usize,
        column: String,
        reason: String,
    },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Broad failure classes used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonFinite { .. }
            | Error::Data(_)
            | Error::Csv { .. }
            | Error::Cell { .. }
            | Error::Io(_)
            | Error::File { .. }
            | Error::DimensionMismatch { .. } => ErrorClass::Data,
            Error::Integration { .. } | Error::Overflow(_) => ErrorClass::Numerical,
            _ => ErrorClass::Usage,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Usage => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numerical => 4,
        }
    }
}
