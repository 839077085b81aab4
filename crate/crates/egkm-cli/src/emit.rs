//! Report rendering: a markdown page of per-metric comparison tables, a
//! long-format CSV, and a plot-ready TSV of mean separation scores.

use std::path::{Path, PathBuf};

use egkm::Technique;

use crate::error::CliError;
use crate::experiment::{Aggregate, ExperimentReport, OutputFormat, ReportRow};

/// The per-cell metrics, in emission order.
const METRICS: [&str; 5] = ["db_index", "sse", "wall_time_ms", "empty_clusters", "k_used"];

fn metric_value(row: &ReportRow, metric: &str) -> Option<Aggregate> {
    match metric {
        "db_index" => row.db_index,
        "sse" => row.sse,
        "wall_time_ms" => row.wall_time_ms,
        "empty_clusters" => row.empty_clusters,
        "k_used" => row.k_used,
        other => unreachable!("unknown metric {other}"),
    }
}

fn datasets_in_order(report: &ExperimentReport) -> Vec<String> {
    let mut seen = Vec::new();
    for row in &report.rows {
        if !seen.contains(&row.dataset) {
            seen.push(row.dataset.clone());
        }
    }
    seen
}

fn find_row<'a>(
    report: &'a ExperimentReport,
    dataset: &str,
    technique: Technique,
) -> Option<&'a ReportRow> {
    report
        .rows
        .iter()
        .find(|r| r.dataset == dataset && r.technique == technique)
}

/// Markdown table cells cannot hold raw pipes or newlines.
fn sanitize_cell(text: &str) -> String {
    text.replace('\n', "; ").replace('|', "\\|")
}

pub fn render(report: &ExperimentReport, format: OutputFormat) -> Result<String, CliError> {
    if report.rows.is_empty() {
        return Err(CliError::Usage("refusing to render an empty report".into()));
    }
    Ok(match format {
        OutputFormat::Markdown => render_markdown(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::PlotData => render_plot_data(report),
    })
}

/// Write every requested format into `dir` and return the paths written.
pub fn write_outputs(
    report: &ExperimentReport,
    dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for &format in formats {
        let text = render(report, format)?;
        let path = dir.join(format.file_name());
        std::fs::write(&path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

fn render_markdown(report: &ExperimentReport) -> String {
    let meta = &report.metadata;
    let mut out = String::new();
    out.push_str("# Clustering benchmark report\n\n");
    out.push_str(&format!("- tool version: {}\n", meta.tool_version));
    out.push_str(&format!("- repetitions: {}\n", meta.repetitions));
    out.push_str(&format!("- base seed: {}\n", meta.base_seed));
    let technique_names: Vec<&str> = meta.techniques.iter().map(Technique::as_str).collect();
    out.push_str(&format!("- techniques: {}\n", technique_names.join(", ")));
    out.push_str(&format!("- PRNG: {}\n", meta.prng));
    out.push_str(&format!("- normalization: {}\n", meta.normalization));

    let datasets = datasets_in_order(report);
    for metric in METRICS {
        out.push('\n');
        out.push_str(&format!("## {metric}\n\n"));
        out.push_str("Mean over successful repetitions");
        if metric == "db_index" {
            out.push_str("; lower is better, best per row in bold");
        }
        out.push_str(".\n\n");

        out.push_str("| dataset |");
        for t in &meta.techniques {
            out.push_str(&format!(" {} |", t.as_str()));
        }
        out.push('\n');
        out.push_str("| --- |");
        for _ in &meta.techniques {
            out.push_str(" --- |");
        }
        out.push('\n');

        for dataset in &datasets {
            let cells: Vec<Option<&ReportRow>> = meta
                .techniques
                .iter()
                .map(|&t| find_row(report, dataset, t))
                .collect();
            let best = if metric == "db_index" {
                cells
                    .iter()
                    .filter_map(|r| r.and_then(|r| r.db_index).map(|g| g.mean))
                    .fold(f64::INFINITY, f64::min)
            } else {
                f64::INFINITY
            };

            out.push_str(&format!("| {} |", sanitize_cell(dataset)));
            for row in cells {
                let cell = match row {
                    None => "—".to_string(),
                    Some(row) => match (&row.error, metric_value(row, metric)) {
                        (Some(message), _) => format!("ERROR: {}", sanitize_cell(message)),
                        (None, Some(agg)) => {
                            if metric == "db_index" && agg.mean == best {
                                format!("**{:.4}**", agg.mean)
                            } else {
                                format!("{:.4}", agg.mean)
                            }
                        }
                        (None, None) => "—".to_string(),
                    },
                };
                out.push_str(&format!(" {cell} |"));
            }
            out.push('\n');
        }
    }

    out.push_str("\n## successful repetitions\n\n");
    out.push_str("| dataset |");
    for t in &meta.techniques {
        out.push_str(&format!(" {} |", t.as_str()));
    }
    out.push_str("\n| --- |");
    for _ in &meta.techniques {
        out.push_str(" --- |");
    }
    out.push('\n');
    for dataset in &datasets {
        out.push_str(&format!("| {} |", sanitize_cell(dataset)));
        for &t in &meta.techniques {
            let cell = match find_row(report, dataset, t) {
                Some(row) => format!("{}/{}", row.reps_used, row.reps_requested),
                None => "—".to_string(),
            };
            out.push_str(&format!(" {cell} |"));
        }
        out.push('\n');
    }
    out
}

fn render_csv(report: &ExperimentReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["dataset", "technique", "metric", "mean", "std", "reps"])
        .expect("csv write to memory");
    for row in &report.rows {
        if let Some(message) = &row.error {
            writer
                .write_record([
                    row.dataset.as_str(),
                    row.technique.as_str(),
                    &format!("ERROR: {message}"),
                    "",
                    "",
                    "0",
                ])
                .expect("csv write to memory");
            continue;
        }
        for metric in METRICS {
            let agg = metric_value(row, metric).expect("scored row has every metric");
            writer
                .write_record([
                    row.dataset.as_str(),
                    row.technique.as_str(),
                    metric,
                    &format!("{}", agg.mean),
                    &format!("{}", agg.std),
                    &format!("{}", row.reps_used),
                ])
                .expect("csv write to memory");
        }
    }
    String::from_utf8(writer.into_inner().expect("csv flush to memory"))
        .expect("csv output is utf-8")
}

fn render_plot_data(report: &ExperimentReport) -> String {
    let mut out = String::from("dataset\ttechnique\tmean_db\n");
    let datasets = datasets_in_order(report);
    for dataset in &datasets {
        for &technique in &report.metadata.techniques {
            if let Some(agg) = find_row(report, dataset, technique).and_then(|r| r.db_index) {
                out.push_str(&format!("{dataset}\t{}\t{}\n", technique.as_str(), agg.mean));
            }
        }
    }
    for &technique in &report.metadata.techniques {
        let means: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.technique == technique)
            .filter_map(|r| r.db_index)
            .map(|g| g.mean)
            .collect();
        if !means.is_empty() {
            let overall = means.iter().sum::<f64>() / means.len() as f64;
            out.push_str(&format!("OVERALL\t{}\t{overall}\n", technique.as_str()));
        }
    }
    out
}
