//! CSV dataset loading with missing-value row dropping, plus per-feature
//! z-score normalization.

use std::path::Path;

use crate::core::{DataPoint, Dataset};
use crate::error::EgkmError;

/// A column referenced by header name or 0-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSel {
    Name(String),
    Index(usize),
}

impl ColumnSel {
    fn resolve(&self, headers: &[String]) -> Result<usize, EgkmError> {
        match self {
            ColumnSel::Name(name) => headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| {
                    EgkmError::Usage(format!(
                        "column {name:?} not found; header has {headers:?}"
                    ))
                }),
            ColumnSel::Index(idx) => {
                if *idx < headers.len() {
                    Ok(*idx)
                } else {
                    Err(EgkmError::Usage(format!(
                        "column index {idx} out of range for {} header columns",
                        headers.len()
                    )))
                }
            }
        }
    }
}

impl From<&str> for ColumnSel {
    fn from(name: &str) -> Self {
        ColumnSel::Name(name.to_string())
    }
}

impl From<usize> for ColumnSel {
    fn from(idx: usize) -> Self {
        ColumnSel::Index(idx)
    }
}

/// Which columns to read and which cell tokens mean "value missing".
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSchema {
    pub feature_columns: Vec<ColumnSel>,
    pub label_column: Option<ColumnSel>,
    /// Cell contents treated as missing, matched exactly. A missing
    /// marker in a feature column drops the whole row; markers in the
    /// label column are kept as-is.
    pub missing_markers: Vec<String>,
    pub delimiter: u8,
}

impl CsvSchema {
    /// Schema over the given feature column names with the default
    /// missing markers (empty string, "?", "NA") and comma delimiter.
    pub fn from_names(features: &[&str]) -> Self {
        Self {
            feature_columns: features.iter().map(|&f| f.into()).collect(),
            label_column: None,
            missing_markers: Self::default_missing_markers(),
            delimiter: b',',
        }
    }

    pub fn default_missing_markers() -> Vec<String> {
        vec![String::new(), "?".to_string(), "NA".to_string()]
    }

    pub fn with_label(mut self, label: impl Into<ColumnSel>) -> Self {
        self.label_column = Some(label.into());
        self
    }
}

/// Load a delimiter-separated file with a header row into a dataset.
/// Rows with a missing marker in any feature column are dropped; the
/// surviving rows get compacted 0-based ids in file order.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset, EgkmError> {
    if schema.feature_columns.is_empty() {
        return Err(EgkmError::Usage("schema lists no feature columns".into()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .from_path(path)
        .map_err(|e| map_csv_open_error(path, e))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| EgkmError::Parse {
            row: 0,
            column: "(header)".into(),
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();

    let feature_idx: Vec<usize> = schema
        .feature_columns
        .iter()
        .map(|c| c.resolve(&headers))
        .collect::<Result<_, _>>()?;
    let label_idx = schema
        .label_column
        .as_ref()
        .map(|c| c.resolve(&headers))
        .transpose()?;
    if let Some(l) = label_idx {
        if feature_idx.contains(&l) {
            return Err(EgkmError::Usage(format!(
                "label column {:?} is also listed as a feature",
                headers[l]
            )));
        }
    }

    let mut points = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1;
        let record = record.map_err(|e| EgkmError::Parse {
            row,
            column: "(record)".into(),
            message: e.to_string(),
        })?;

        let has_missing = feature_idx.iter().any(|&idx| {
            record
                .get(idx)
                .is_some_and(|cell| schema.missing_markers.iter().any(|m| m == cell))
        });
        if has_missing {
            continue;
        }

        let mut features = Vec::with_capacity(feature_idx.len());
        for &idx in &feature_idx {
            let cell = record.get(idx).ok_or_else(|| EgkmError::Parse {
                row,
                column: headers[idx].clone(),
                message: "cell missing from record".into(),
            })?;
            let value: f64 = cell.trim().parse().map_err(|_| EgkmError::Parse {
                row,
                column: headers[idx].clone(),
                message: format!("cannot parse {cell:?} as a number"),
            })?;
            if !value.is_finite() {
                return Err(EgkmError::Parse {
                    row,
                    column: headers[idx].clone(),
                    message: format!("non-finite value {cell:?}"),
                });
            }
            features.push(value);
        }
        if let Some(idx) = label_idx {
            labels.push(record.get(idx).unwrap_or("").to_string());
        }
        points.push(DataPoint::new(points.len(), features));
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    if points.is_empty() {
        return Err(EgkmError::EmptyDataset(name));
    }
    let dim = feature_idx.len();
    Dataset::new(name, dim, points, label_idx.map(|_| labels))
}

fn map_csv_open_error(path: &Path, e: csv::Error) -> EgkmError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => EgkmError::Io {
            path: path.to_path_buf(),
            source: io,
        },
        other => EgkmError::Parse {
            row: 0,
            column: "(file)".into(),
            message: format!("{other:?}"),
        },
    }
}

/// Shift and scale every feature column to zero mean and unit standard
/// deviation (population form). Zero-variance columns map to all zeros.
/// Ids, name, and labels are preserved.
pub fn zscore_normalize(d: &Dataset) -> Dataset {
    let n = d.len() as f64;
    let mut means = vec![0.0; d.dim];
    for p in &d.points {
        for (m, v) in means.iter_mut().zip(&p.features) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut stds = vec![0.0; d.dim];
    for p in &d.points {
        for ((s, v), m) in stds.iter_mut().zip(&p.features).zip(&means) {
            let dev = v - m;
            *s += dev * dev;
        }
    }
    for s in &mut stds {
        *s = (*s / n).sqrt();
    }

    let points = d
        .points
        .iter()
        .map(|p| {
            let features = p
                .features
                .iter()
                .zip(&means)
                .zip(&stds)
                .map(|((v, m), s)| if *s == 0.0 { 0.0 } else { (v - m) / s })
                .collect();
            DataPoint::new(p.id, features)
        })
        .collect();
    Dataset::new(d.name.clone(), d.dim, points, d.labels.clone())
        .expect("normalization preserves dataset validity")
}
