use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the clustering pipeline, ingestion, and metrics.
#[derive(Debug, Error)]
pub enum EgkmError {
    /// API misuse: mismatched dimensions, invalid configuration values.
    #[error("usage error: {0}")]
    Usage(String),

    /// The input is too small or too degenerate for the requested operation.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Centroid position fell outside a chunk under the `Error` index policy.
    #[error("centroid position {position} out of range for chunk {chunk} of length {len}")]
    CentroidIndexOutOfRange {
        chunk: usize,
        position: usize,
        len: usize,
    },

    #[error("failed to read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A feature cell that is neither numeric nor a missing-value marker.
    #[error("parse error at data row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    /// The requested metric is not defined for this clustering.
    #[error("metric undefined: {0}")]
    MetricUndefined(String),
}

impl EgkmError {
    /// Whether this error stems from caller misuse rather than bad data.
    pub fn is_usage(&self) -> bool {
        matches!(self, EgkmError::Usage(_))
    }
}
