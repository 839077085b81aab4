//! Bundled data: the seven single-column reference value sets, previously
//! published comparison scores kept as inert reference data, and a
//! deterministic generator for synthetic benchmark datasets that match the
//! published shapes (row counts, feature counts, class counts, and
//! missing-value counts) of the original corpus, which is not redistributable
//! here.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use egkm::XorShift64Star;

use crate::error::CliError;

/// The seven reference value sets used by the worked examples and tests.
pub const REFERENCE_SETS: [(&str, &[f64]); 7] = [
    ("set_a", &[2.0, 4.3, 5.0, 6.0, 8.0, 9.0, 10.0, 90.0, 12.0, 21.0, 34.0]),
    ("set_b", &[9.0, 80.0, 31.0, 15.0, 4.0, 8.0, 7.0, 90.0, 11.0]),
    ("set_c", &[20.0, 3.0, 45.0, 26.0, 3.0, 2.0, 10.0, 8.0, 10.0, 3.0, 13.0]),
    ("set_d", &[2.0, 4.0, 3.0, 5.0, 6.0, 8.0, 9.0, 10.0, 90.0, 12.0, 21.0, 34.0]),
    ("set_e", &[3.0, 10.0, 15.0, 26.0, 18.0, 4.0, 1.0, -1.0]),
    ("set_f", &[32.0, 34.0, 3.0, 15.0, 4.0, 8.0, 19.0, 32.0, 21.0]),
    ("set_g", &[20.0, 9.0, 30.0, 15.0, 16.0, 98.0, 9.0, 10.0, 90.0]),
];

/// Annotation carried on every published reference row.
pub const PUBLISHED_NOTE: &str = "published reference value; not an acceptance gate";

/// One previously published separation-index score, kept for side-by-side
/// reading only — nothing in this tool is validated against these numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedScore {
    /// Which comparison the value belongs to.
    pub block: &'static str,
    pub dataset: &'static str,
    pub algorithm: &'static str,
    pub db_index: f64,
}

const VALUE_SET_ALGORITHMS: [&str; 7] = [
    "eg_kmeans",
    "genclust_pp",
    "genclust_f",
    "agcuk",
    "genclust_h",
    "gagr",
    "kmeans",
];

const VALUE_SET_SCORES: [(&str, [f64; 7]); 7] = [
    ("set_a", [0.911, 0.92, 1.512, 1.690, 1.311, 1.32151, 1.6212]),
    ("set_b", [0.99, 0.991, 1.009, 1.452, 1.110, 1.321, 1.60]),
    ("set_c", [0.85, 0.821, 1.002, 1.034, 1.109, 1.453, 1.034]),
    ("set_d", [0.812, 0.730, 1.213, 1.321, 1.490, 1.321, 1.321]),
    ("set_e", [0.714, 0.713, 1.12, 1.60, 1.54, 1.31, 1.321]),
    ("set_f", [0.721, 0.723, 1.67, 1.94, 1.42, 1.21, 1.321]),
    ("set_g", [0.91, 0.992, 1.42, 1.942, 1.23, 1.92, 1.43]),
];

const BENCHMARK_ALGORITHMS: [&str; 7] = [
    "eg_kmeans",
    "genclust_pp",
    "genclust_h",
    "genclust_f",
    "agcuk",
    "gagr",
    "kmeans",
];

const BENCHMARK_SCORES: [(&str, [f64; 7]); 10] = [
    ("page_blocks_classification", [0.724, 0.9300, 0.9699, 1.3005, 1.0220, 1.7854, 1.1902]),
    ("mammographic_mass", [0.326, 0.5814, 0.6067, 0.6076, 0.7918, 1.4228, 1.3025]),
    ("credit_approval", [0.45, 0.4578, 1.2177, 1.8548, 0.977, 1.255, 1.645]),
    ("yeast", [1.013, 1.5461, 1.5944, 1.8663, 1.6315, 1.9571, 1.7531]),
    ("glass_identification", [1.395, 1.1978, 1.5079, 1.4221, 1.4563, 1.3367, 1.3963]),
    ("liver_disorder", [0.987, 1.1047, 1.1295, 1.4352, 1.2080, 1.7698, 1.6065]),
    ("dermatology", [0.765, 1.1155, 1.1759, 1.4950, 1.2307, 2.1240, 2.1687]),
    ("haberman", [1.058, 1.3380, 1.3694, 1.3449, 1.7001, 1.3811, 3.0937]),
    ("tic_tac_toe", [1.001, 0.6639, 0.7220, 0.7318, 0.987, 1.123, 1.321]),
    ("contraceptive_method_choice", [1.311, 1.0246, 1.0246, 1.0262, 1.026, 1.524, 1.224]),
];

/// Every published reference score, in block order.
pub fn published_scores() -> Vec<PublishedScore> {
    let mut out = Vec::new();
    for (dataset, values) in VALUE_SET_SCORES {
        for (algorithm, &db_index) in VALUE_SET_ALGORITHMS.iter().zip(values.iter()) {
            out.push(PublishedScore { block: "value_sets", dataset, algorithm, db_index });
        }
    }
    for (dataset, values) in BENCHMARK_SCORES {
        for (algorithm, &db_index) in BENCHMARK_ALGORITHMS.iter().zip(values.iter()) {
            out.push(PublishedScore { block: "benchmark_datasets", dataset, algorithm, db_index });
        }
    }
    out
}

/// Shape of one synthetic benchmark dataset: row count before and after
/// missing-value dropping, feature count, and the class count handed to the
/// baseline techniques.
#[derive(Debug, Clone, Copy)]
pub struct StandinShape {
    pub name: &'static str,
    pub rows: usize,
    pub clean_rows: usize,
    pub features: usize,
    pub classes: usize,
}

pub const STANDIN_SHAPES: [StandinShape; 10] = [
    StandinShape {
        name: "page_blocks_classification",
        rows: 5472,
        clean_rows: 5472,
        features: 10,
        classes: 5,
    },
    StandinShape { name: "mammographic_mass", rows: 961, clean_rows: 830, features: 5, classes: 2 },
    StandinShape { name: "credit_approval", rows: 345, clean_rows: 345, features: 6, classes: 1 },
    StandinShape { name: "yeast", rows: 1484, clean_rows: 1484, features: 8, classes: 10 },
    StandinShape {
        name: "glass_identification",
        rows: 214,
        clean_rows: 214,
        features: 10,
        classes: 7,
    },
    StandinShape { name: "liver_disorder", rows: 345, clean_rows: 345, features: 6, classes: 2 },
    StandinShape { name: "dermatology", rows: 366, clean_rows: 358, features: 34, classes: 6 },
    StandinShape { name: "haberman", rows: 306, clean_rows: 306, features: 3, classes: 3 },
    StandinShape { name: "tic_tac_toe", rows: 958, clean_rows: 958, features: 9, classes: 2 },
    StandinShape {
        name: "contraceptive_method_choice",
        rows: 1473,
        clean_rows: 1473,
        features: 2,
        classes: 3,
    },
];

/// Write the seven reference sets as single-column CSVs plus a ready-to-run
/// manifest and the published reference scores. Returns the paths written.
pub fn write_reference_fixtures(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();

    let mut manifest = String::new();
    for (name, values) in REFERENCE_SETS {
        let mut body = String::from("value\n");
        for v in values {
            let _ = writeln!(body, "{v}");
        }
        written.push(write_file(dir, &format!("{name}.csv"), &body)?);

        let _ = writeln!(manifest, "[[dataset]]");
        let _ = writeln!(manifest, "name = \"{name}\"");
        let _ = writeln!(manifest, "path = \"{name}.csv\"");
        let _ = writeln!(manifest, "features = [\"value\"]");
        let _ = writeln!(manifest, "classes = 2");
        let _ = writeln!(manifest);
    }
    written.push(write_file(dir, "manifest.toml", &manifest)?);

    let mut reference = String::from("block,dataset,algorithm,db_index,note\n");
    for score in published_scores() {
        let _ = writeln!(
            reference,
            "{},{},{},{},{PUBLISHED_NOTE}",
            score.block, score.dataset, score.algorithm, score.db_index
        );
    }
    written.push(write_file(dir, "published_reference.csv", &reference)?);
    Ok(written)
}

/// Write the ten synthetic benchmark datasets and their manifest. Returns the
/// paths written.
pub fn write_benchmark_standins(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();

    let mut manifest = String::new();
    for shape in STANDIN_SHAPES {
        written.push(write_file(dir, &format!("{}.csv", shape.name), &generate_standin(&shape))?);

        let feature_list: Vec<String> =
            (0..shape.features).map(|i| format!("\"f{i}\"")).collect();
        let _ = writeln!(manifest, "[[dataset]]");
        let _ = writeln!(manifest, "name = \"{}\"", shape.name);
        let _ = writeln!(manifest, "path = \"{}.csv\"", shape.name);
        let _ = writeln!(manifest, "features = [{}]", feature_list.join(", "));
        let _ = writeln!(manifest, "label = \"class\"");
        let _ = writeln!(manifest, "classes = {}", shape.classes);
        let _ = writeln!(manifest);
    }
    written.push(write_file(dir, "manifest.toml", &manifest)?);
    Ok(written)
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, body)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn name_seed(name: &str) -> u64 {
    // FNV-1a; any stable name-to-seed map does, it just has to be fixed.
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in name.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// One standard normal draw.
fn normal(rng: &mut XorShift64Star) -> f64 {
    let u1 = 1.0 - rng.next_f64(); // (0, 1]: the log stays finite
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Synthetic rows shaped like the benchmarked datasets: points lie along one
/// dominant direction in two widely separated, unequal-mass radial bands,
/// with class labels carved from radial quantiles at skewed proportions.
/// Unequal masses keep the two bands at distinct distances from the data
/// mean, so the structure survives per-column normalization. Returns the CSV
/// body.
fn generate_standin(shape: &StandinShape) -> String {
    let mut rng = XorShift64Star::new(name_seed(shape.name));
    let dim = shape.features;
    let root_dim = (dim as f64).sqrt();

    // Band geometry along the dominant direction; widths shrink with
    // dimension so the normalized radial span stays comparable across
    // datasets.
    let separation = 36.0;
    let base = 5.0;
    let width_near = 8.0 / root_dim;
    let width_far = 0.55 * width_near;
    let noise = 0.6 / dim as f64;
    let near_rows = (0.7 * shape.rows as f64).round() as usize;

    // Components are bounded away from zero so every column carries enough
    // of the radial signal to dominate the noise after normalization.
    let direction: Vec<f64> = {
        let raw: Vec<f64> = (0..dim).map(|_| 0.35 + normal(&mut rng).abs()).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        raw.iter().map(|v| v / norm).collect()
    };

    let radii: Vec<f64> = (0..shape.rows)
        .map(|row| {
            if row < near_rows {
                base + width_near * rng.next_f64()
            } else {
                base + separation + width_far * rng.next_f64()
            }
        })
        .collect();

    let mut cells: Vec<Vec<String>> = Vec::with_capacity(shape.rows);
    for &radius in &radii {
        let row: Vec<String> = direction
            .iter()
            .map(|&u| format!("{:.6}", radius * u + noise * normal(&mut rng)))
            .collect();
        cells.push(row);
    }

    // Label by radial quantile with skewed class proportions 1/(j+1).
    let weights: Vec<f64> = (0..shape.classes).map(|j| 1.0 / (j as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut quantile_edges: Vec<usize> = Vec::with_capacity(shape.classes);
    let mut cumulative = 0.0;
    for w in &weights {
        cumulative += w / total;
        quantile_edges.push((cumulative * shape.rows as f64).round() as usize);
    }
    *quantile_edges.last_mut().expect("at least one class") = shape.rows;

    let mut by_radius: Vec<usize> = (0..shape.rows).collect();
    by_radius.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    let mut labels = vec![0usize; shape.rows];
    for (rank, &row) in by_radius.iter().enumerate() {
        labels[row] = quantile_edges.iter().position(|&edge| rank < edge).unwrap();
    }

    // Shuffle rows so cluster blocks are interleaved like a real file.
    let order = rng.sample_without_replacement(shape.rows, shape.rows);

    // Blank out one feature cell in exactly rows - clean_rows distinct rows.
    let missing = shape.rows - shape.clean_rows;
    for row in rng.sample_without_replacement(shape.rows, missing) {
        let column = rng.next_index(dim);
        cells[order[row]][column] = "?".to_string();
    }

    let mut body = String::new();
    for i in 0..dim {
        if i > 0 {
            body.push(',');
        }
        let _ = write!(body, "f{i}");
    }
    body.push_str(",class\n");
    for &source in &order {
        let _ = writeln!(body, "{},c{}", cells[source].join(","), labels[source]);
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::load_manifest;
    use egkm::{load_csv, zscore_normalize};

    #[test]
    fn reference_sets_hold_the_canonical_values() {
        let set_e = REFERENCE_SETS.iter().find(|(n, _)| *n == "set_e").unwrap().1;
        assert_eq!(set_e, &[3.0, 10.0, 15.0, 26.0, 18.0, 4.0, 1.0, -1.0]);
        let set_c = REFERENCE_SETS.iter().find(|(n, _)| *n == "set_c").unwrap().1;
        assert_eq!(set_c.len(), 11);
    }

    #[test]
    fn published_scores_cover_both_blocks_with_notes() {
        let scores = published_scores();
        assert_eq!(scores.len(), 7 * 7 + 10 * 7);
        let eg_a = scores
            .iter()
            .find(|s| s.dataset == "set_a" && s.algorithm == "eg_kmeans")
            .unwrap();
        assert_eq!(eg_a.db_index, 0.911);
        let km_haberman = scores
            .iter()
            .find(|s| s.dataset == "haberman" && s.algorithm == "kmeans")
            .unwrap();
        assert_eq!(km_haberman.db_index, 3.0937);
    }

    #[test]
    fn reference_fixtures_round_trip_through_the_manifest() {
        let dir = tempfile::tempdir().unwrap();
        write_reference_fixtures(dir.path()).unwrap();

        let entries = load_manifest(&dir.path().join("manifest.toml")).unwrap();
        assert_eq!(entries.len(), 7);
        for (entry, (name, values)) in entries.iter().zip(REFERENCE_SETS) {
            assert_eq!(entry.name, name);
            let dataset = load_csv(&entry.path, &entry.schema()).unwrap();
            assert_eq!(dataset.len(), values.len(), "{name}");
            assert_eq!(dataset.dim, 1);
            let loaded: Vec<f64> = dataset.points.iter().map(|p| p.features[0]).collect();
            assert_eq!(loaded, values, "{name}");
        }

        let reference = std::fs::read_to_string(dir.path().join("published_reference.csv")).unwrap();
        let lines: Vec<&str> = reference.lines().collect();
        assert_eq!(lines.len(), 1 + 7 * 7 + 10 * 7);
        assert!(lines[1..].iter().all(|l| l.ends_with(PUBLISHED_NOTE)));
        assert!(reference.contains("value_sets,set_a,eg_kmeans,0.911,"));
        assert!(reference.contains("benchmark_datasets,haberman,kmeans,3.0937,"));
    }

    #[test]
    fn standins_have_the_published_shapes() {
        let dir = tempfile::tempdir().unwrap();
        write_benchmark_standins(dir.path()).unwrap();
        let entries = load_manifest(&dir.path().join("manifest.toml")).unwrap();
        assert_eq!(entries.len(), 10);

        for (entry, shape) in entries.iter().zip(STANDIN_SHAPES) {
            assert_eq!(entry.name, shape.name);
            assert_eq!(entry.classes, shape.classes);
            assert_eq!(entry.features.len(), shape.features);

            let raw = std::fs::read_to_string(&entry.path).unwrap();
            assert_eq!(raw.lines().count(), shape.rows + 1, "{}", shape.name);

            let dataset = load_csv(&entry.path, &entry.schema()).unwrap();
            assert_eq!(dataset.len(), shape.clean_rows, "{}", shape.name);
            assert_eq!(dataset.dim, shape.features);
            let labels = dataset.labels.as_ref().unwrap();
            assert!(labels.iter().all(|l| l.starts_with('c')));
        }
    }

    #[test]
    fn standin_generation_is_deterministic() {
        let a = generate_standin(&STANDIN_SHAPES[7]); // haberman: small
        let b = generate_standin(&STANDIN_SHAPES[7]);
        assert_eq!(a, b);
    }

    #[test]
    fn standin_labels_form_the_declared_class_count() {
        let body = generate_standin(&STANDIN_SHAPES[4]); // glass: 7 classes
        let mut classes: Vec<&str> =
            body.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
        classes.sort_unstable();
        classes.dedup();
        assert_eq!(classes.len(), 7);
    }

    #[test]
    fn normalized_standins_have_clean_moments() {
        let dir = tempfile::tempdir().unwrap();
        write_benchmark_standins(dir.path()).unwrap();
        let entries = load_manifest(&dir.path().join("manifest.toml")).unwrap();
        let entry = entries.iter().find(|e| e.name == "haberman").unwrap();
        let dataset = zscore_normalize(&load_csv(&entry.path, &entry.schema()).unwrap());
        for d in 0..dataset.dim {
            let column: Vec<f64> = dataset.points.iter().map(|p| p.features[d]).collect();
            let n = column.len() as f64;
            let mean = column.iter().sum::<f64>() / n;
            let std =
                (column.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            assert!(mean.abs() < 1e-9, "column {d} mean {mean}");
            assert!((std - 1.0).abs() < 1e-9, "column {d} std {std}");
        }
    }
}
