//! Deterministic k-means seeding with automatic cluster-count selection.
//!
//! The pipeline reduces each point to a scalar sort key, integerizes the
//! keys, sorts and deduplicates them, derives candidate cluster counts
//! from ceiling-divisor sequences over the distinct-key count, partitions
//! the sorted data into that many chunks, reverses each chunk, seeds one
//! centroid per chunk at a fixed within-chunk position, and assigns every
//! point to its nearest centroid in the full feature space. No stage uses
//! randomness, so results are bit-identical across runs.

use std::collections::BTreeSet;

use crate::baselines::{self, EmptyClusterPolicy};
use crate::core::{
    squared_distance, stable_sort_points, Centroid, ClusteringResult, DataPoint, Dataset,
    DivisorTrace, Technique,
};
use crate::error::EgkmError;

/// How a multi-feature point is reduced to the scalar used for ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortKey {
    /// The single feature itself; only valid for 1-D data.
    Value1d,
    /// Euclidean norm of the feature vector.
    L2Norm,
    /// Sum of the feature coordinates.
    FeatureSum,
}

impl SortKey {
    pub fn as_str(self) -> &'static str {
        match self {
            SortKey::Value1d => "value_1d",
            SortKey::L2Norm => "l2_norm",
            SortKey::FeatureSum => "feature_sum",
        }
    }
}

impl std::fmt::Display for SortKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SortKey {
    type Err = EgkmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "value" | "value1d" | "value_1d" => Ok(SortKey::Value1d),
            "norm" | "l2" | "l2norm" | "l2_norm" => Ok(SortKey::L2Norm),
            "sum" | "featuresum" | "feature_sum" => Ok(SortKey::FeatureSum),
            other => Err(EgkmError::Usage(format!(
                "unknown sort key {other:?} (expected value_1d, l2_norm, or feature_sum)"
            ))),
        }
    }
}

/// What to do when the seeding position falls past the end of a chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentroidIndexPolicy {
    /// Use the chunk's last element.
    ClampToChunk,
    /// Abort with an out-of-range error.
    Error,
}

/// Even or odd divisor family for [`divisor_sequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Divisors 2, 4, 6, …
    Even,
    /// Divisors 3, 5, 7, …
    Odd,
}

/// Tunables of the deterministic pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct EgConfig {
    /// Scale factor applied to fractional sort keys of magnitude < 10
    /// before flooring; must be a positive multiple of 10.
    pub arbitrary_constant: u64,
    /// Sort-key mode. `None` picks [`SortKey::Value1d`] for 1-D data and
    /// [`SortKey::L2Norm`] otherwise, which keeps 1-D orderings signed.
    pub sort_key: Option<SortKey>,
    /// Out-of-range handling during centroid seeding.
    pub centroid_index_policy: CentroidIndexPolicy,
    /// Number of assignment/update rounds appended after seeding; 0 means
    /// the faithful single assignment pass.
    pub refinement_iterations: usize,
    /// Fixed cluster count that bypasses the automatic selection.
    pub k_override: Option<usize>,
}

impl Default for EgConfig {
    fn default() -> Self {
        Self {
            arbitrary_constant: 10,
            sort_key: None,
            centroid_index_policy: CentroidIndexPolicy::ClampToChunk,
            refinement_iterations: 0,
            k_override: None,
        }
    }
}

impl EgConfig {
    pub fn validate(&self) -> Result<(), EgkmError> {
        if self.arbitrary_constant < 10 || !self.arbitrary_constant.is_multiple_of(10) {
            return Err(EgkmError::Usage(format!(
                "arbitrary_constant must be a positive multiple of 10, got {}",
                self.arbitrary_constant
            )));
        }
        if self.k_override == Some(0) {
            return Err(EgkmError::Usage(
                "k_override must be a positive cluster count".into(),
            ));
        }
        Ok(())
    }

    /// The sort key a run over `dim`-dimensional data will actually use:
    /// the configured one, or the dimension-appropriate default.
    pub fn resolve_sort_key(&self, dim: usize) -> SortKey {
        match self.sort_key {
            Some(mode) => mode,
            None if dim == 1 => SortKey::Value1d,
            None => SortKey::L2Norm,
        }
    }
}

/// Sorted keyed entries plus the distinct-key sequence driving the
/// cluster-count selection. All points are retained in `entries`;
/// deduplication affects only `dedup_keys`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedKeyedData {
    /// `(key, point)` pairs in ascending key order, ties in input order.
    pub entries: Vec<(i64, DataPoint)>,
    /// The key sequence of `entries` with adjacent duplicates collapsed;
    /// strictly increasing.
    pub dedup_keys: Vec<i64>,
}

/// Reduce one point to its scalar sort key.
pub fn compute_sort_key(point: &DataPoint, mode: SortKey) -> Result<f64, EgkmError> {
    match mode {
        SortKey::Value1d => {
            if point.features.len() != 1 {
                return Err(EgkmError::Usage(format!(
                    "value_1d sort key requires 1-D data, point {} has {} features",
                    point.id,
                    point.features.len()
                )));
            }
            Ok(point.features[0])
        }
        SortKey::L2Norm => Ok(squared_distance(
            &point.features,
            &vec![0.0; point.features.len()],
        )
        .sqrt()),
        SortKey::FeatureSum => Ok(point.features.iter().sum()),
    }
}

/// Convert real sort keys to integers: integral values pass through,
/// fractional values of magnitude < 10 are scaled by `a_c` then floored,
/// and larger fractional values are floored directly.
pub fn integerize(keys: &[f64], a_c: u64) -> Vec<i64> {
    keys.iter()
        .map(|&v| {
            if v.fract() == 0.0 {
                v as i64
            } else if v.abs() < 10.0 {
                (v * a_c as f64).floor() as i64
            } else {
                v.floor() as i64
            }
        })
        .collect()
}

/// Stably sort keyed points ascending and collapse runs of equal keys
/// into the distinct-key sequence.
pub fn sort_and_dedup(keyed: Vec<(i64, DataPoint)>) -> SortedKeyedData {
    let entries = stable_sort_points(keyed);
    let mut dedup_keys: Vec<i64> = Vec::new();
    for (key, _) in &entries {
        if dedup_keys.last() != Some(key) {
            dedup_keys.push(*key);
        }
    }
    SortedKeyedData {
        entries,
        dedup_keys,
    }
}

/// Ceiling divisions of `t_s` by ascending even (2, 4, 6, …) or odd
/// (3, 5, 7, …) divisors, stopping at the first repeated value; the
/// repeat is kept once, so the sequence is strictly decreasing.
pub fn divisor_sequence(t_s: usize, parity: Parity) -> Result<Vec<usize>, EgkmError> {
    if t_s < 2 {
        return Err(EgkmError::DegenerateInput(format!(
            "divisor sequences need at least 2 distinct keys, got {t_s}"
        )));
    }
    let start: usize = match parity {
        Parity::Even => 2,
        Parity::Odd => 3,
    };
    let mut seq = Vec::new();
    let mut divisor = start;
    loop {
        let value = t_s.div_ceil(divisor);
        if seq.last() == Some(&value) {
            break;
        }
        seq.push(value);
        divisor += 2;
    }
    Ok(seq)
}

/// Choose the cluster count: the minimum of the two sequences'
/// intersection after dropping the value 1, falling back to the smallest
/// remaining odd-divisor value when the intersection is empty. The
/// boolean reports whether the fallback fired.
pub fn select_k(d_even: &[usize], d_odd: &[usize]) -> Result<(usize, bool), EgkmError> {
    let (candidates, odd_filtered) = k_candidates(d_even, d_odd);
    if let Some(&k) = candidates.first() {
        return Ok((k, false));
    }
    match odd_filtered.iter().min() {
        Some(&k) => Ok((k, true)),
        None => Err(EgkmError::DegenerateInput(format!(
            "no usable cluster count: divisor sequences {d_even:?} / {d_odd:?} \
             contain nothing above 1"
        ))),
    }
}

/// The filtered intersection feeding [`select_k`], plus the filtered odd
/// sequence used by its fallback.
fn k_candidates(d_even: &[usize], d_odd: &[usize]) -> (BTreeSet<usize>, Vec<usize>) {
    let even: BTreeSet<usize> = d_even.iter().copied().filter(|&v| v != 1).collect();
    let odd_filtered: Vec<usize> = d_odd.iter().copied().filter(|&v| v != 1).collect();
    let candidates = odd_filtered
        .iter()
        .copied()
        .filter(|v| even.contains(v))
        .collect();
    (candidates, odd_filtered)
}

/// Split the ascending entries into `k_f` consecutive chunks — base size
/// floor(n / k_f), the last chunk absorbing the remainder — and reverse
/// each chunk so keys run descending within it.
pub fn partition_and_reverse(
    sorted: &SortedKeyedData,
    k_f: usize,
) -> Result<Vec<Vec<(i64, DataPoint)>>, EgkmError> {
    let n = sorted.entries.len();
    if k_f == 0 || k_f > n {
        return Err(EgkmError::DegenerateInput(format!(
            "cannot partition {n} points into {k_f} chunks"
        )));
    }
    let base = n / k_f;
    let mut chunks = Vec::with_capacity(k_f);
    let mut start = 0;
    for i in 0..k_f {
        let end = if i == k_f - 1 { n } else { start + base };
        let mut chunk: Vec<(i64, DataPoint)> = sorted.entries[start..end].to_vec();
        chunk.reverse();
        chunks.push(chunk);
        start = end;
    }
    Ok(chunks)
}

/// Seed one centroid per reversed chunk at 1-based position N, where N is
/// the second-smallest even-divisor value. Positions past a chunk's end
/// either clamp to its last element or abort, per policy. Returns the
/// centroids and N.
pub fn select_centroids(
    chunks: &[Vec<(i64, DataPoint)>],
    d_even: &[usize],
    policy: CentroidIndexPolicy,
) -> Result<(Vec<Centroid>, usize), EgkmError> {
    if d_even.len() < 2 {
        return Err(EgkmError::DegenerateInput(format!(
            "centroid position needs at least 2 even-divisor values, got {d_even:?}"
        )));
    }
    let mut ascending = d_even.to_vec();
    ascending.sort_unstable();
    let n_position = ascending[1];
    let mut centroids = Vec::with_capacity(chunks.len());
    for (chunk_idx, chunk) in chunks.iter().enumerate() {
        let index = if n_position <= chunk.len() {
            n_position - 1
        } else {
            match policy {
                CentroidIndexPolicy::ClampToChunk => chunk.len() - 1,
                CentroidIndexPolicy::Error => {
                    return Err(EgkmError::CentroidIndexOutOfRange {
                        chunk: chunk_idx,
                        position: n_position,
                        len: chunk.len(),
                    })
                }
            }
        };
        centroids.push(Centroid::new(chunk[index].1.features.clone()));
    }
    Ok((centroids, n_position))
}

/// Assign every point to its nearest centroid by Euclidean distance in
/// the full feature space, breaking ties toward the lowest centroid
/// index. A single pass; no centroid updates.
pub fn assign(dataset: &Dataset, centroids: &[Centroid]) -> Result<Vec<usize>, EgkmError> {
    if centroids.is_empty() {
        return Err(EgkmError::Usage("assignment needs at least one centroid".into()));
    }
    if let Some(c) = centroids.iter().find(|c| c.coords.len() != dataset.dim) {
        return Err(EgkmError::Usage(format!(
            "centroid dimensionality {} does not match dataset {}",
            c.coords.len(),
            dataset.dim
        )));
    }
    Ok(dataset
        .points
        .iter()
        .map(|p| nearest_centroid(&p.features, centroids))
        .collect())
}

/// Index of the closest centroid, ties toward the lowest index.
pub(crate) fn nearest_centroid(features: &[f64], centroids: &[Centroid]) -> usize {
    let mut best = 0;
    let mut best_dist = squared_distance(features, &centroids[0].coords);
    for (idx, c) in centroids.iter().enumerate().skip(1) {
        let d = squared_distance(features, &c.coords);
        if d < best_dist {
            best = idx;
            best_dist = d;
        }
    }
    best
}

/// Run the full deterministic pipeline on a dataset.
pub fn eg_kmeans(dataset: &Dataset, config: &EgConfig) -> Result<ClusteringResult, EgkmError> {
    config.validate()?;
    let n = dataset.len();
    if n < 4 {
        return Err(EgkmError::DegenerateInput(format!(
            "dataset {} has {n} points; at least 4 are required",
            dataset.name
        )));
    }
    let mode = config.resolve_sort_key(dataset.dim);
    let mut raw_keys = Vec::with_capacity(n);
    for p in &dataset.points {
        raw_keys.push(compute_sort_key(p, mode)?);
    }
    let int_keys = integerize(&raw_keys, config.arbitrary_constant);
    let keyed: Vec<(i64, DataPoint)> = int_keys
        .into_iter()
        .zip(dataset.points.iter().cloned())
        .collect();
    let sorted = sort_and_dedup(keyed);
    let distinct = sorted.dedup_keys.len();

    let d_even = divisor_sequence(distinct, Parity::Even)?;
    let d_odd = divisor_sequence(distinct, Parity::Odd)?;
    let (candidates, _) = k_candidates(&d_even, &d_odd);
    let (k_f, fallback_used) = match config.k_override {
        Some(k) => (k, false),
        None => select_k(&d_even, &d_odd)?,
    };
    if k_f > distinct {
        return Err(EgkmError::DegenerateInput(format!(
            "cluster count {k_f} exceeds the {distinct} distinct sort keys of \
             dataset {} ({n} points)",
            dataset.name
        )));
    }

    let chunks = partition_and_reverse(&sorted, k_f)?;
    let chunk_sizes: Vec<usize> = chunks.iter().map(Vec::len).collect();
    let (centroids, n_position) =
        select_centroids(&chunks, &d_even, config.centroid_index_policy)?;

    for i in 0..centroids.len() {
        for j in (i + 1)..centroids.len() {
            if centroids[i].coords == centroids[j].coords {
                return Err(EgkmError::DegenerateInput(format!(
                    "seeded centroids {i} and {j} coincide at {:?}; dataset {} \
                     has too many duplicate points for {k_f} clusters",
                    centroids[i].coords, dataset.name
                )));
            }
        }
    }

    let assignments = assign(dataset, &centroids)?;

    let trace = DivisorTrace {
        t_s: n,
        distinct_keys: distinct,
        d_even,
        d_odd,
        k_candidates: candidates,
        k_f,
        fallback_used,
        n_position,
        chunk_sizes,
    };

    let (assignments, centroids, iterations) = if config.refinement_iterations > 0 {
        let outcome = baselines::iterate_rounds(
            dataset,
            centroids,
            assignments,
            config.refinement_iterations,
            0.0,
            EmptyClusterPolicy::ReseedFarthest,
        );
        (outcome.assignments, outcome.centroids, outcome.rounds)
    } else {
        (assignments, centroids, 0)
    };

    Ok(ClusteringResult::new(
        k_f,
        assignments,
        centroids,
        Technique::EgKmeans,
        None,
        iterations,
        Some(trace),
    ))
}
