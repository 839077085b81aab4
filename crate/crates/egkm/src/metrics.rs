//! Cluster-quality metrics: Davies–Bouldin index, sum of squared errors,
//! empty-cluster count, and distance-based outlier flagging.

use crate::core::{squared_distance, ClusteringResult, Dataset};
use crate::error::EgkmError;

/// Default sigma multiplier for [`detect_outliers`].
pub const DEFAULT_OUTLIER_SIGMA: f64 = 3.0;

/// All metrics for one clustering of one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub db_index: f64,
    pub sse: f64,
    pub empty_clusters: usize,
    /// Number of clusters that actually hold points.
    pub k_effective: usize,
    pub outlier_ids: Vec<usize>,
}

/// Point ids grouped by cluster index; inner vectors hold row positions.
fn members_by_cluster(result: &ClusteringResult) -> Vec<Vec<usize>> {
    let mut members = vec![Vec::new(); result.k];
    for (row, &a) in result.assignments.iter().enumerate() {
        members[a].push(row);
    }
    members
}

fn cluster_mean(dataset: &Dataset, rows: &[usize]) -> Vec<f64> {
    let mut mean = vec![0.0; dataset.dim];
    for &row in rows {
        for (m, v) in mean.iter_mut().zip(&dataset.points[row].features) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= rows.len() as f64;
    }
    mean
}

/// Davies–Bouldin index: the average over clusters of the worst-case
/// ratio (σ_i + σ_j) / d(c_i, c_j), where σ is the mean member distance
/// to the cluster mean and d is the Euclidean distance between cluster
/// means. Cluster representatives are always recomputed as means — the
/// result's stored centroids (which may be seeded data points) are not
/// used. Only nonempty clusters participate.
pub fn db_index(dataset: &Dataset, result: &ClusteringResult) -> Result<f64, EgkmError> {
    let members: Vec<(usize, Vec<usize>)> = members_by_cluster(result)
        .into_iter()
        .enumerate()
        .filter(|(_, rows)| !rows.is_empty())
        .collect();
    let k = members.len();
    if k < 2 {
        return Err(EgkmError::MetricUndefined(format!(
            "Davies–Bouldin needs at least 2 nonempty clusters, dataset {} has {k}",
            dataset.name
        )));
    }

    let means: Vec<Vec<f64>> = members
        .iter()
        .map(|(_, rows)| cluster_mean(dataset, rows))
        .collect();
    let scatters: Vec<f64> = members
        .iter()
        .zip(&means)
        .map(|((_, rows), mean)| {
            rows.iter()
                .map(|&row| squared_distance(&dataset.points[row].features, mean).sqrt())
                .sum::<f64>()
                / rows.len() as f64
        })
        .collect();

    let mut sum = 0.0;
    for i in 0..k {
        let mut worst = 0.0f64;
        for j in 0..k {
            if i == j {
                continue;
            }
            let separation = squared_distance(&means[i], &means[j]).sqrt();
            if separation == 0.0 {
                return Err(EgkmError::MetricUndefined(format!(
                    "clusters {} and {} of dataset {} have coincident means",
                    members[i].0, members[j].0, dataset.name
                )));
            }
            worst = worst.max((scatters[i] + scatters[j]) / separation);
        }
        sum += worst;
    }
    Ok(sum / k as f64)
}

/// Sum of squared Euclidean distances from each point to its assigned
/// centroid, using the centroids stored in the result.
pub fn sse(dataset: &Dataset, result: &ClusteringResult) -> f64 {
    dataset
        .points
        .iter()
        .zip(&result.assignments)
        .map(|(p, &a)| squared_distance(&p.features, &result.centroids[a].coords))
        .sum()
}

/// Number of cluster indices in `[0, k)` with no assigned points.
pub fn empty_cluster_count(result: &ClusteringResult) -> usize {
    result.cluster_sizes().iter().filter(|&&s| s == 0).count()
}

/// Flag points whose distance to their assigned centroid exceeds the
/// cluster's mean distance plus `threshold_sigma` population standard
/// deviations. Clusters with 2 or fewer members flag nothing. Returns
/// point ids in ascending order.
pub fn detect_outliers(
    dataset: &Dataset,
    result: &ClusteringResult,
    threshold_sigma: f64,
) -> Vec<usize> {
    let mut flagged = Vec::new();
    for (cluster, rows) in members_by_cluster(result).into_iter().enumerate() {
        if rows.len() <= 2 {
            continue;
        }
        let centroid = &result.centroids[cluster].coords;
        let distances: Vec<f64> = rows
            .iter()
            .map(|&row| squared_distance(&dataset.points[row].features, centroid).sqrt())
            .collect();
        let mean = distances.iter().sum::<f64>() / distances.len() as f64;
        let variance = distances
            .iter()
            .map(|d| (d - mean) * (d - mean))
            .sum::<f64>()
            / distances.len() as f64;
        let threshold = mean + threshold_sigma * variance.sqrt();
        for (&row, &d) in rows.iter().zip(&distances) {
            if d > threshold {
                flagged.push(dataset.points[row].id);
            }
        }
    }
    flagged.sort_unstable();
    flagged
}

/// Evaluate every metric at once. Fails when the Davies–Bouldin index is
/// undefined for this clustering.
pub fn metrics_report(
    dataset: &Dataset,
    result: &ClusteringResult,
    threshold_sigma: f64,
) -> Result<MetricsReport, EgkmError> {
    let empty = empty_cluster_count(result);
    Ok(MetricsReport {
        db_index: db_index(dataset, result)?,
        sse: sse(dataset, result),
        empty_clusters: empty,
        k_effective: result.k - empty,
        outlier_ids: detect_outliers(dataset, result, threshold_sigma),
    })
}
