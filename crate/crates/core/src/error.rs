use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text. `origin` names the file (or stream) and line.
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    /// Input that parses but violates a structural rule of the crosswalk format.
    #[error("structural error in {context}: {message}")]
    Structural { context: String, message: String },

    #[error("map {source_code} has no candidate codes (m = 0) and cannot be scored")]
    EmptyMap { source_code: String },

    #[error("{measure} is undefined for {value} (needs a positive count)")]
    UndefinedScore { measure: &'static str, value: u64 },

    #[error("empty column: entropy needs at least one alphabet")]
    EmptyColumn,

    #[error("weight vector has {got} entries but the matrix has width {expected}")]
    WeightLength { expected: usize, got: usize },

    #[error("weight at position {position} is {value}; weights must be positive")]
    NonPositiveWeight { position: usize, value: f64 },

    #[error("normalization needs at least 2 maps, got {0}")]
    InsufficientData(usize),

    #[error("cannot normalize {measure}: all values are identical (zero spread)")]
    DegenerateMeasure { measure: &'static str },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("top fraction {0} is outside (0, 1]")]
    InvalidFraction(f64),

    #[error("duplicate key {key} in {table}")]
    DuplicateKey { table: String, key: String },

    #[error("class ranges overlap: {first} and {second}")]
    OverlappingClasses { first: String, second: String },

    #[error("invalid class range {low}-{high}: {message}")]
    InvalidClassRange {
        low: String,
        high: String,
        message: String,
    },

    #[error("rankings cover different classes; symmetric difference: {}", .0.join(", "))]
    MismatchedClassSets(Vec<String>),

    #[error("Kendall tau needs at least 2 paired observations, got {0}")]
    TooFewPairs(usize),

    #[error("Kendall tau is undefined: one ranking is entirely tied")]
    UndefinedCorrelation,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("eigenvector centrality did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid tolerance {0}; must be positive")]
    InvalidTolerance(f64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
