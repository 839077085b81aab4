//! Shared domain types and the deterministic numeric primitives every
//! other module builds on.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::EgkmError;

/// One row of a dataset: a 0-based id plus its feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DataPoint {
    pub id: usize,
    pub features: Vec<f64>,
}

impl DataPoint {
    pub fn new(id: usize, features: Vec<f64>) -> Self {
        Self { id, features }
    }
}

/// A collection of points sharing one dimensionality, with optional class
/// labels kept for evaluation only.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub dim: usize,
    pub points: Vec<DataPoint>,
    pub labels: Option<Vec<String>>,
}

impl Dataset {
    /// Build a dataset, validating that it is nonempty, that every point
    /// has `dim` finite features, and that labels (when present) line up
    /// with the points.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        points: Vec<DataPoint>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, EgkmError> {
        let name = name.into();
        if points.is_empty() {
            return Err(EgkmError::EmptyDataset(name));
        }
        if dim == 0 {
            return Err(EgkmError::Usage(format!(
                "dataset {name}: dimensionality must be positive"
            )));
        }
        for p in &points {
            if p.features.len() != dim {
                return Err(EgkmError::Usage(format!(
                    "dataset {name}: point {} has {} features, expected {dim}",
                    p.id,
                    p.features.len()
                )));
            }
            if let Some(v) = p.features.iter().find(|v| !v.is_finite()) {
                return Err(EgkmError::Usage(format!(
                    "dataset {name}: point {} has non-finite feature value {v}",
                    p.id
                )));
            }
        }
        if let Some(ref l) = labels {
            if l.len() != points.len() {
                return Err(EgkmError::Usage(format!(
                    "dataset {name}: {} labels for {} points",
                    l.len(),
                    points.len()
                )));
            }
        }
        Ok(Self {
            name,
            dim,
            points,
            labels,
        })
    }

    /// Convenience constructor for 1-D data with ids in input order.
    pub fn from_values_1d(name: impl Into<String>, values: &[f64]) -> Result<Self, EgkmError> {
        let points = values
            .iter()
            .enumerate()
            .map(|(id, &v)| DataPoint::new(id, vec![v]))
            .collect();
        Self::new(name, 1, points, None)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A cluster representative in the dataset's feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub coords: Vec<f64>,
}

impl Centroid {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// Which clustering technique produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Technique {
    EgKmeans,
    KmeansRandom,
    KmeansPp,
}

impl Technique {
    pub const ALL: [Technique; 3] = [
        Technique::EgKmeans,
        Technique::KmeansRandom,
        Technique::KmeansPp,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Technique::EgKmeans => "eg_kmeans",
            Technique::KmeansRandom => "kmeans_random",
            Technique::KmeansPp => "kmeans_pp",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Technique {
    type Err = EgkmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eg" | "eg_kmeans" | "egkmeans" => Ok(Technique::EgKmeans),
            "random" | "kmeans" | "kmeans_random" => Ok(Technique::KmeansRandom),
            "pp" | "kmeans_pp" | "kmeanspp" | "kmeans++" => Ok(Technique::KmeansPp),
            other => Err(EgkmError::Usage(format!(
                "unknown technique {other:?} (expected eg_kmeans, kmeans_random, or kmeans_pp)"
            ))),
        }
    }
}

/// The intermediate artifacts of the automatic cluster-count selection,
/// kept on every EG result for introspection and testing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTrace {
    /// Total number of data points fed to the pipeline.
    pub t_s: usize,
    /// Number of distinct integerized sort keys; the divisor sequences are
    /// computed over this count.
    pub distinct_keys: usize,
    /// Ceiling divisions of `distinct_keys` by ascending even divisors.
    pub d_even: Vec<usize>,
    /// Ceiling divisions of `distinct_keys` by ascending odd divisors.
    pub d_odd: Vec<usize>,
    /// Intersection of the two sequences after dropping the value 1.
    pub k_candidates: BTreeSet<usize>,
    /// The selected cluster count.
    pub k_f: usize,
    /// True when the intersection was empty and the smallest odd-divisor
    /// value was used instead.
    pub fallback_used: bool,
    /// 1-based within-chunk position of each seeded centroid (the second
    /// smallest even-divisor value; the position parameter is fixed at 2).
    pub n_position: usize,
    /// Size of each chunk of the sorted data, in chunk order.
    pub chunk_sizes: Vec<usize>,
}

impl fmt::Display for DivisorTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total points (t_s)   : {}", self.t_s)?;
        writeln!(f, "distinct sort keys   : {}", self.distinct_keys)?;
        writeln!(f, "d_even               : {:?}", self.d_even)?;
        writeln!(f, "d_odd                : {:?}", self.d_odd)?;
        let candidates: Vec<usize> = self.k_candidates.iter().copied().collect();
        writeln!(f, "K (intersection)     : {candidates:?}")?;
        writeln!(
            f,
            "K_f                  : {}{}",
            self.k_f,
            if self.fallback_used {
                " (fallback: smallest odd-divisor value)"
            } else {
                ""
            }
        )?;
        writeln!(f, "chunk sizes          : {:?}", self.chunk_sizes)?;
        write!(f, "centroid position N  : {}", self.n_position)
    }
}

/// A finished clustering: assignments, centroids, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub k: usize,
    /// `assignments[point.id]` is the point's cluster index in `[0, k)`.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Centroid>,
    pub technique: Technique,
    pub seed: Option<u64>,
    pub iterations: usize,
    pub trace: Option<DivisorTrace>,
}

impl ClusteringResult {
    /// Assemble a result, checking that every assignment lands in `[0, k)`
    /// and, for EG results, asserting the no-empty-cluster guarantee.
    ///
    /// Panics if an EG result contains an empty cluster; the pipeline
    /// rejects the degenerate inputs that could cause one before reaching
    /// this constructor, so a panic here indicates an internal bug.
    pub fn new(
        k: usize,
        assignments: Vec<usize>,
        centroids: Vec<Centroid>,
        technique: Technique,
        seed: Option<u64>,
        iterations: usize,
        trace: Option<DivisorTrace>,
    ) -> Self {
        assert!(k >= 1, "cluster count must be positive");
        assert_eq!(
            centroids.len(),
            k,
            "centroid count {} does not match k {k}",
            centroids.len()
        );
        for (id, &a) in assignments.iter().enumerate() {
            assert!(a < k, "point {id} assigned to cluster {a} >= k {k}");
        }
        if technique == Technique::EgKmeans {
            let mut counts = vec![0usize; k];
            for &a in &assignments {
                counts[a] += 1;
            }
            for (idx, &c) in counts.iter().enumerate() {
                assert!(c > 0, "EG result left cluster {idx} of {k} empty");
            }
        }
        Self {
            k,
            assignments,
            centroids,
            technique,
            seed,
            iterations,
            trace,
        }
    }

    /// Number of points assigned to each cluster index.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.k];
        for &a in &self.assignments {
            counts[a] += 1;
        }
        counts
    }
}

/// Euclidean distance between two equal-length feature vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64, EgkmError> {
    if a.len() != b.len() {
        return Err(EgkmError::Usage(format!(
            "euclidean_distance: dimensionality mismatch ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(squared_distance(a, b).sqrt())
}

/// Squared Euclidean distance, for callers that only compare magnitudes.
/// Lengths must already match.
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Stable ascending sort of `(key, payload)` pairs. Equal keys keep their
/// original input order; all keys must be finite (or totally ordered).
pub fn stable_sort_points<K: PartialOrd + Copy, T>(mut items: Vec<(K, T)>) -> Vec<(K, T)> {
    items.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("sort keys must be totally ordered (finite)")
    });
    items
}

/// Literal insertion sort behind the same contract as
/// [`stable_sort_points`]; retained so the two can be cross-checked.
pub fn insertion_sort_points<K: PartialOrd + Copy, T>(mut items: Vec<(K, T)>) -> Vec<(K, T)> {
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1].0 > items[j].0 {
            items.swap(j - 1, j);
            j -= 1;
        }
    }
    items
}
