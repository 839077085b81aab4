//! Lloyd's k-means with random-point and D²-weighted seeding, the
//! randomized comparison techniques run against the deterministic
//! pipeline. Includes empty-cluster repair so runs always finish with a
//! usable partition.

use std::collections::HashSet;

use crate::core::{squared_distance, Centroid, ClusteringResult, Dataset, Technique};
use crate::egkmeans::nearest_centroid;
use crate::error::EgkmError;
use crate::rng::XorShift64Star;

/// How the initial centroids are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    /// Distinct data points drawn uniformly without replacement.
    RandomPoints,
    /// D²-weighted seeding: each next centroid is drawn with probability
    /// proportional to its squared distance to the nearest chosen one.
    KmeansPp,
    /// Caller supplies the centroids.
    Provided,
}

/// What to do when an update round leaves a cluster with no members.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyClusterPolicy {
    /// Replace the empty cluster's centroid with the point farthest from
    /// it; keeps k constant and the final result free of empty clusters.
    ReseedFarthest,
    /// Remove the empty cluster, shrinking k.
    Drop,
}

/// Tunables for a Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydConfig {
    pub k: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the maximum centroid displacement per
    /// round.
    pub convergence_tol: f64,
    pub seed: u64,
    pub init: InitMethod,
    pub empty_cluster_policy: EmptyClusterPolicy,
}

impl LloydConfig {
    pub fn new(k: usize, seed: u64, init: InitMethod) -> Self {
        Self {
            k,
            max_iterations: 100,
            convergence_tol: 1e-6,
            seed,
            init,
            empty_cluster_policy: EmptyClusterPolicy::ReseedFarthest,
        }
    }
}

/// Number of distinct feature vectors in the dataset, by exact bitwise
/// coordinate equality.
fn distinct_point_count(dataset: &Dataset) -> usize {
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(dataset.len());
    for p in &dataset.points {
        seen.insert(p.features.iter().map(|v| v.to_bits()).collect());
    }
    seen.len()
}

fn check_k(dataset: &Dataset, k: usize) -> Result<(), EgkmError> {
    if k == 0 {
        return Err(EgkmError::Usage("cluster count must be positive".into()));
    }
    let distinct = distinct_point_count(dataset);
    if k > distinct {
        return Err(EgkmError::Usage(format!(
            "cannot seed {k} clusters from {distinct} distinct points \
             (dataset {}, {} rows)",
            dataset.name,
            dataset.len()
        )));
    }
    Ok(())
}

/// `k` distinct data points drawn uniformly without replacement under a
/// seeded generator. Rows whose coordinates duplicate an already-drawn
/// point are skipped, so the returned centroids are pairwise distinct.
pub fn random_init(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Centroid>, EgkmError> {
    check_k(dataset, k)?;
    let n = dataset.len();
    let mut rng = XorShift64Star::new(seed);
    let order = rng.sample_without_replacement(n, n);
    let mut chosen: Vec<Centroid> = Vec::with_capacity(k);
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(k);
    for idx in order {
        let coords = &dataset.points[idx].features;
        if seen.insert(coords.iter().map(|v| v.to_bits()).collect()) {
            chosen.push(Centroid::new(coords.clone()));
            if chosen.len() == k {
                break;
            }
        }
    }
    Ok(chosen)
}

/// D²-weighted seeding: the first centroid is uniform, each subsequent
/// one is drawn with probability proportional to its squared distance to
/// the nearest centroid chosen so far. If all remaining weights are zero,
/// falls back to a uniform draw among the rows not yet chosen.
pub fn kmeanspp_init(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Centroid>, EgkmError> {
    check_k(dataset, k)?;
    let n = dataset.len();
    let mut rng = XorShift64Star::new(seed);

    let first = rng.next_index(n);
    let mut chosen_rows = vec![first];
    let mut centroids = vec![Centroid::new(dataset.points[first].features.clone())];
    let mut d2: Vec<f64> = dataset
        .points
        .iter()
        .map(|p| squared_distance(&p.features, &centroids[0].coords))
        .collect();

    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next_row = if total > 0.0 {
            let r = rng.next_f64() * total;
            let mut cum = 0.0;
            let mut picked = None;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if r < cum {
                    picked = Some(i);
                    break;
                }
            }
            // Guard against the cumulative sum falling a rounding error
            // short of `total`: take the last positive-weight row.
            picked.unwrap_or_else(|| {
                d2.iter()
                    .rposition(|&w| w > 0.0)
                    .expect("total > 0 implies a positive weight")
            })
        } else {
            let remaining: Vec<usize> =
                (0..n).filter(|i| !chosen_rows.contains(i)).collect();
            remaining[rng.next_index(remaining.len())]
        };
        chosen_rows.push(next_row);
        let coords = dataset.points[next_row].features.clone();
        for (i, p) in dataset.points.iter().enumerate() {
            let d = squared_distance(&p.features, &coords);
            if d < d2[i] {
                d2[i] = d;
            }
        }
        centroids.push(Centroid::new(coords));
    }
    Ok(centroids)
}

/// One Lloyd trajectory's end state.
pub(crate) struct IterationOutcome {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Centroid>,
    pub rounds: usize,
}

/// Sum of squared distances from each point to its assigned centroid.
fn total_sse(dataset: &Dataset, assignments: &[usize], centroids: &[Centroid]) -> f64 {
    dataset
        .points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| squared_distance(&p.features, &centroids[a].coords))
        .sum()
}

/// Run up to `max_rounds` update/assign rounds from the given state,
/// stopping early when the maximum centroid displacement drops below
/// `tol`. Empty clusters found during an update are repaired per policy;
/// with [`EmptyClusterPolicy::Drop`] the centroid list shrinks and the
/// assignments are remapped to the surviving indices.
pub(crate) fn iterate_rounds(
    dataset: &Dataset,
    mut centroids: Vec<Centroid>,
    mut assignments: Vec<usize>,
    max_rounds: usize,
    tol: f64,
    policy: EmptyClusterPolicy,
) -> IterationOutcome {
    let dim = dataset.dim;
    let mut prev_sse = total_sse(dataset, &assignments, &centroids);
    let mut rounds = 0;

    for _ in 0..max_rounds {
        rounds += 1;
        let k = centroids.len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in dataset.points.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(&p.features) {
                *s += v;
            }
        }

        let mut new_centroids: Vec<Option<Centroid>> = Vec::with_capacity(k);
        let mut reseeded: Vec<usize> = Vec::new();
        for c in 0..k {
            if counts[c] > 0 {
                let mean: Vec<f64> =
                    sums[c].iter().map(|s| s / counts[c] as f64).collect();
                new_centroids.push(Some(Centroid::new(mean)));
            } else {
                match policy {
                    EmptyClusterPolicy::ReseedFarthest => {
                        let row = farthest_point(dataset, &centroids[c].coords, &reseeded);
                        reseeded.push(row);
                        new_centroids
                            .push(Some(Centroid::new(dataset.points[row].features.clone())));
                    }
                    EmptyClusterPolicy::Drop => new_centroids.push(None),
                }
            }
        }

        // Compact away dropped clusters and remap assignment indices.
        let mut index_map = vec![usize::MAX; k];
        let mut survivors: Vec<Centroid> = Vec::with_capacity(k);
        let mut displacement = 0.0f64;
        for (old_idx, slot) in new_centroids.into_iter().enumerate() {
            if let Some(c) = slot {
                index_map[old_idx] = survivors.len();
                let moved = squared_distance(&centroids[old_idx].coords, &c.coords).sqrt();
                displacement = displacement.max(moved);
                survivors.push(c);
            }
        }
        centroids = survivors;
        for a in &mut assignments {
            debug_assert_ne!(index_map[*a], usize::MAX, "dropped a populated cluster");
            *a = index_map[*a];
        }

        for (p, a) in dataset.points.iter().zip(&mut assignments) {
            *a = nearest_centroid(&p.features, &centroids);
        }

        let new_sse = total_sse(dataset, &assignments, &centroids);
        debug_assert!(
            new_sse <= prev_sse + 1e-9,
            "SSE increased in round {rounds}: {prev_sse} -> {new_sse}"
        );
        prev_sse = new_sse;

        if displacement < tol {
            break;
        }
    }

    IterationOutcome {
        assignments,
        centroids,
        rounds,
    }
}

/// Row index of the point farthest from `from`, skipping rows already
/// used as reseed targets this round; ties take the lowest row.
fn farthest_point(dataset: &Dataset, from: &[f64], exclude: &[usize]) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in dataset.points.iter().enumerate() {
        if exclude.contains(&i) {
            continue;
        }
        let d = squared_distance(&p.features, from);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((i, d));
        }
    }
    match best {
        Some((i, _)) => i,
        // Every row excluded: fall back to the overall farthest.
        None => {
            let mut idx = 0;
            let mut bd = -1.0;
            for (i, p) in dataset.points.iter().enumerate() {
                let d = squared_distance(&p.features, from);
                if d > bd {
                    bd = d;
                    idx = i;
                }
            }
            idx
        }
    }
}

/// Lloyd's algorithm: seed centroids per the configured method, then
/// alternate nearest-centroid assignment and mean updates until the
/// maximum centroid displacement falls below the tolerance or the
/// iteration cap is reached.
pub fn lloyd(
    dataset: &Dataset,
    config: &LloydConfig,
    provided: Option<&[Centroid]>,
) -> Result<ClusteringResult, EgkmError> {
    if config.k == 0 {
        return Err(EgkmError::Usage("cluster count must be positive".into()));
    }
    if config.k > dataset.len() {
        return Err(EgkmError::Usage(format!(
            "cluster count {} exceeds dataset size {}",
            config.k,
            dataset.len()
        )));
    }
    let centroids = match config.init {
        InitMethod::RandomPoints => random_init(dataset, config.k, config.seed)?,
        InitMethod::KmeansPp => kmeanspp_init(dataset, config.k, config.seed)?,
        InitMethod::Provided => {
            let given = provided.ok_or_else(|| {
                EgkmError::Usage("provided-centroid init requires centroids".into())
            })?;
            if given.len() != config.k {
                return Err(EgkmError::Usage(format!(
                    "{} centroids provided for k = {}",
                    given.len(),
                    config.k
                )));
            }
            if let Some(c) = given.iter().find(|c| c.coords.len() != dataset.dim) {
                return Err(EgkmError::Usage(format!(
                    "provided centroid dimensionality {} does not match dataset {}",
                    c.coords.len(),
                    dataset.dim
                )));
            }
            given.to_vec()
        }
    };

    let assignments: Vec<usize> = dataset
        .points
        .iter()
        .map(|p| nearest_centroid(&p.features, &centroids))
        .collect();
    let outcome = iterate_rounds(
        dataset,
        centroids,
        assignments,
        config.max_iterations,
        config.convergence_tol,
        config.empty_cluster_policy,
    );

    let technique = match config.init {
        InitMethod::KmeansPp => Technique::KmeansPp,
        InitMethod::RandomPoints | InitMethod::Provided => Technique::KmeansRandom,
    };
    Ok(ClusteringResult::new(
        outcome.centroids.len(),
        outcome.assignments,
        outcome.centroids,
        technique,
        Some(config.seed),
        outcome.rounds,
        None,
    ))
}
