//! The benchmark protocol: for every (dataset, technique) pair, run the
//! technique `repetitions` times on the normalized data, score each run, and
//! aggregate mean and standard deviation per metric.

use std::path::PathBuf;
use std::time::Instant;

use egkm::{
    db_index, eg_kmeans, empty_cluster_count, lloyd, load_csv, sse, zscore_normalize, Dataset,
    EgConfig, InitMethod, LloydConfig, Technique,
};

use crate::error::CliError;
use crate::manifest::DatasetEntry;

/// Everything a `run` invocation needs.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub datasets: Vec<DatasetEntry>,
    pub techniques: Vec<Technique>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub output_formats: Vec<OutputFormat>,
}

pub const DEFAULT_REPETITIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Markdown,
    Csv,
    PlotData,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] =
        [OutputFormat::Markdown, OutputFormat::Csv, OutputFormat::PlotData];

    pub fn file_name(self) -> &'static str {
        match self {
            OutputFormat::Markdown => "report.md",
            OutputFormat::Csv => "report.csv",
            OutputFormat::PlotData => "plotdata.tsv",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            "plotdata" | "plot" | "tsv" => Ok(OutputFormat::PlotData),
            other => Err(CliError::Usage(format!(
                "unknown output format {other:?} (expected markdown, csv, or plotdata)"
            ))),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.datasets.is_empty() {
            return Err(CliError::Usage("experiment lists no datasets".into()));
        }
        if self.techniques.is_empty() {
            return Err(CliError::Usage("experiment lists no techniques".into()));
        }
        if self.repetitions == 0 {
            return Err(CliError::Usage("repetitions must be at least 1".into()));
        }
        let mut seen = Vec::new();
        for t in &self.techniques {
            if seen.contains(t) {
                return Err(CliError::Usage(format!("technique {t} listed twice")));
            }
            seen.push(*t);
        }
        Ok(())
    }
}

/// Mean and population standard deviation over the successful repetitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
}

impl Aggregate {
    /// Identical samples get an exact zero spread rather than whatever
    /// rounding the summation order would leave behind.
    pub fn from_samples(samples: &[f64]) -> Aggregate {
        assert!(!samples.is_empty(), "aggregating zero samples");
        if samples.windows(2).all(|w| w[0] == w[1]) {
            return Aggregate { mean: samples[0], std: 0.0 };
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Aggregate { mean, std: var.sqrt() }
    }
}

/// Aggregated scores for one (dataset, technique) cell, or the error that
/// prevented them.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub dataset: String,
    pub technique: Technique,
    pub reps_requested: usize,
    /// Repetitions that produced a scored clustering.
    pub reps_used: usize,
    pub db_index: Option<Aggregate>,
    pub sse: Option<Aggregate>,
    pub wall_time_ms: Option<Aggregate>,
    pub empty_clusters: Option<Aggregate>,
    pub k_used: Option<Aggregate>,
    /// Set when the dataset failed to load or every repetition failed.
    pub error: Option<String>,
}

impl ReportRow {
    fn failed(dataset: &str, technique: Technique, reps: usize, message: String) -> ReportRow {
        ReportRow {
            dataset: dataset.to_string(),
            technique,
            reps_requested: reps,
            reps_used: 0,
            db_index: None,
            sse: None,
            wall_time_ms: None,
            empty_clusters: None,
            k_used: None,
            error: Some(message),
        }
    }
}

/// Report provenance, echoed into every emitted file.
#[derive(Debug, Clone)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub base_seed: u64,
    pub repetitions: usize,
    pub techniques: Vec<Technique>,
    pub prng: String,
    pub normalization: String,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

/// Run the full protocol. Dataset failures become error rows; nothing short
/// of an invalid spec aborts the sweep.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, CliError> {
    spec.validate()?;

    let mut rows = Vec::with_capacity(spec.datasets.len() * spec.techniques.len());
    for entry in &spec.datasets {
        match load_and_normalize(entry) {
            Ok(data) => {
                for &technique in &spec.techniques {
                    rows.push(run_cell(&data, entry, technique, spec));
                }
            }
            Err(err) => {
                let message = err.to_string();
                for &technique in &spec.techniques {
                    rows.push(ReportRow::failed(
                        &entry.name,
                        technique,
                        spec.repetitions,
                        message.clone(),
                    ));
                }
            }
        }
    }

    Ok(ExperimentReport {
        metadata: ReportMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            base_seed: spec.base_seed,
            repetitions: spec.repetitions,
            techniques: spec.techniques.clone(),
            prng: "xorshift64* (64-bit state; zero seed remapped to a fixed constant)".to_string(),
            normalization: "per-column z-score, population std; constant columns map to 0"
                .to_string(),
        },
        rows,
    })
}

fn load_and_normalize(entry: &DatasetEntry) -> Result<Dataset, CliError> {
    let mut dataset = load_csv(&entry.path, &entry.schema())?;
    dataset.name = entry.name.clone();
    Ok(zscore_normalize(&dataset))
}

fn run_cell(
    data: &Dataset,
    entry: &DatasetEntry,
    technique: Technique,
    spec: &ExperimentSpec,
) -> ReportRow {
    let mut dbs = Vec::with_capacity(spec.repetitions);
    let mut sses = Vec::new();
    let mut walls = Vec::new();
    let mut empties = Vec::new();
    let mut ks = Vec::new();
    let mut last_error = None;

    for rep in 0..spec.repetitions {
        let seed = spec.base_seed.wrapping_add(rep as u64);

        let started = Instant::now();
        let result = match technique {
            Technique::EgKmeans => eg_kmeans(data, &EgConfig::default()),
            Technique::KmeansRandom => {
                lloyd(data, &LloydConfig::new(entry.classes, seed, InitMethod::RandomPoints), None)
            }
            Technique::KmeansPp => {
                lloyd(data, &LloydConfig::new(entry.classes, seed, InitMethod::KmeansPp), None)
            }
        };
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;

        let scored = result.and_then(|r| db_index(data, &r).map(|db| (r, db)));
        match scored {
            Ok((result, db)) => {
                dbs.push(db);
                sses.push(sse(data, &result));
                walls.push(wall_ms);
                empties.push(empty_cluster_count(&result) as f64);
                ks.push(result.k as f64);
            }
            Err(err) => last_error = Some(err.to_string()),
        }
    }

    if dbs.is_empty() {
        let message =
            last_error.unwrap_or_else(|| "no repetition produced a scored clustering".into());
        return ReportRow::failed(&entry.name, technique, spec.repetitions, message);
    }
    ReportRow {
        dataset: entry.name.clone(),
        technique,
        reps_requested: spec.repetitions,
        reps_used: dbs.len(),
        db_index: Some(Aggregate::from_samples(&dbs)),
        sse: Some(Aggregate::from_samples(&sses)),
        wall_time_ms: Some(Aggregate::from_samples(&walls)),
        empty_clusters: Some(Aggregate::from_samples(&empties)),
        k_used: Some(Aggregate::from_samples(&ks)),
        error: None,
    }
}
