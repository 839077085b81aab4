//! Clustering library built around EG k-means: a fully deterministic
//! pipeline that picks the cluster count from divisor sequences of the
//! distinct-key count and seeds centroids from a sorted, chunked, reversed
//! ordering of the data. Lloyd's algorithm with random and k-means++
//! seeding is included as the comparison baseline, together with the
//! Davies-Bouldin index, SSE, and distance-based outlier detection.
//!
//! The companion `egkm-cli` crate drives experiments over CSV datasets.

pub mod baselines;
pub mod core;
pub mod egkmeans;
mod error;
pub mod ingest;
pub mod metrics;
pub mod rng;

pub use crate::baselines::{
    kmeanspp_init, lloyd, random_init, EmptyClusterPolicy, InitMethod, LloydConfig,
};
pub use crate::core::{
    euclidean_distance, insertion_sort_points, stable_sort_points, Centroid, ClusteringResult,
    DataPoint, Dataset, DivisorTrace, Technique,
};
pub use crate::egkmeans::{
    assign, compute_sort_key, divisor_sequence, eg_kmeans, integerize, partition_and_reverse,
    select_centroids, select_k, sort_and_dedup, CentroidIndexPolicy, EgConfig, Parity, SortKey,
    SortedKeyedData,
};
pub use crate::error::EgkmError;
pub use crate::ingest::{load_csv, zscore_normalize, ColumnSel, CsvSchema};
pub use crate::metrics::{
    db_index, detect_outliers, empty_cluster_count, metrics_report, sse, MetricsReport,
    DEFAULT_OUTLIER_SIGMA,
};
pub use crate::rng::XorShift64Star;
