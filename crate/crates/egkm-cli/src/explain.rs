//! Human-readable walk-through of the deterministic seeding pipeline on one
//! dataset: every intermediate table, the chunk layout, and the seeds.

use std::path::Path;

use egkm::{eg_kmeans, load_csv, CsvSchema, EgConfig, SortKey};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct ExplainOptions {
    /// Forced sort key; default picks by dimensionality.
    pub sort_key: Option<SortKey>,
    /// Scaling constant for fractional sort keys.
    pub arbitrary_constant: u64,
}

impl Default for ExplainOptions {
    fn default() -> Self {
        ExplainOptions {
            sort_key: None,
            arbitrary_constant: EgConfig::default().arbitrary_constant,
        }
    }
}

/// Run the pipeline on the raw file contents (every column is a feature; no
/// normalization, so the trace matches what a reader can verify by hand) and
/// return the full trace as text. Degenerate inputs surface the pipeline
/// error unchanged.
pub fn explain_dataset(path: &Path, options: &ExplainOptions) -> Result<String, CliError> {
    let headers = read_headers(path)?;
    let names: Vec<&str> = headers.iter().map(String::as_str).collect();
    let dataset = load_csv(path, &CsvSchema::from_names(&names))?;

    let config = EgConfig {
        arbitrary_constant: options.arbitrary_constant,
        sort_key: options.sort_key,
        ..EgConfig::default()
    };
    let result = eg_kmeans(&dataset, &config)?;
    let trace = result.trace.as_ref().expect("deterministic pipeline always carries a trace");

    let mut out = String::new();
    out.push_str(&format!(
        "dataset              : {} ({} points, {} feature{})\n",
        dataset.name,
        dataset.len(),
        dataset.dim,
        if dataset.dim == 1 { "" } else { "s" }
    ));
    out.push_str(&format!(
        "sort key             : {}\n",
        config.resolve_sort_key(dataset.dim)
    ));
    out.push_str(&format!(
        "arbitrary constant   : {}\n",
        config.arbitrary_constant
    ));
    out.push_str(&format!("{trace}\n"));

    let mut start = 0usize;
    let boundaries: Vec<String> = trace
        .chunk_sizes
        .iter()
        .map(|&size| {
            let text = format!("[{start}..{})", start + size);
            start += size;
            text
        })
        .collect();
    out.push_str(&format!(
        "chunk boundaries     : {} (positions in sorted order)\n",
        boundaries.join(", ")
    ));

    out.push_str("seeded centroids     :\n");
    for (cluster, centroid) in result.centroids.iter().enumerate() {
        let coords: Vec<String> = centroid.coords.iter().map(|c| format!("{c}")).collect();
        out.push_str(&format!("  cluster {cluster} <- ({})\n", coords.join(", ")));
    }

    out.push_str(&format!("cluster sizes        : {:?}\n", result.cluster_sizes()));
    Ok(out)
}

fn read_headers(path: &Path) -> Result<Vec<String>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Data(format!("failed to read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Data(format!("bad header in {}: {e}", path.display())))?;
    Ok(headers.iter().map(str::to_string).collect())
}
