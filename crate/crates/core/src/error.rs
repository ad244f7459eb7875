use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure class, used by the command line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}: row {row}, column '{column}': {message}")]
    Parse {
        file: String,
        row: usize,
        column: String,
        message: String,
    },

    #[error("date ranges differ: {0}")]
    Alignment(String),

    #[error("{file}: row {row}: duplicate date {date}")]
    DuplicateDate {
        file: String,
        row: usize,
        date: String,
    },

    #[error("invalid site identifier '{0}'")]
    InvalidSite(String),

    #[error("duplicate site '{0}'")]
    DuplicateSite(String),

    #[error("unknown site '{0}'")]
    UnknownSite(String),

    #[error("unknown wind variable '{0}' (expected avg, gust or dir)")]
    UnknownVariable(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("index {index} out of range for series of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{method} needs present neighbours around index {index}")]
    InsufficientNeighbors { method: &'static str, index: usize },

    #[error("cubic spline needs at least {needed} present points, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("index {index} lies outside the spline knot range")]
    Extrapolation { index: usize },

    #[error("no point of the series is scorable with {0}")]
    NoApplicablePoints(&'static str),

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("maximum lag {max_lag} out of range for series of length {len}")]
    LagOutOfRange { max_lag: usize, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("input too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),

    #[error("series for site '{site}' has {count} absent sample(s); fill missing values first")]
    IncompleteSeries { site: String, count: usize },

    #[error("regressor matrix is rank deficient; collinear columns: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    #[error("insufficient data: {samples} usable rows for {params} parameters")]
    InsufficientData { samples: usize, params: usize },

    #[error("history length mismatch: {0}")]
    HistoryLength(String),

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("model incompatible with dataset: {0}")]
    ModelMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            UnknownVariable(_) | InvalidArgument(_) => ErrorClass::Usage,
            ZeroVariance
            | RankDeficient { .. }
            | InsufficientData { .. }
            | InsufficientPoints { .. }
            | InsufficientNeighbors { .. }
            | Extrapolation { .. }
            | NoApplicablePoints(_)
            | LagOutOfRange { .. }
            | TooShort { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Data,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
