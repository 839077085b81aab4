//! The dataset manifest: a TOML file with one `[[dataset]]` stanza per
//! dataset, naming the file, its feature and label columns, the class count
//! used to size the baseline techniques, and the missing-value markers.

use std::path::{Path, PathBuf};

use egkm::CsvSchema;
use serde::Deserialize;

use crate::error::CliError;

/// One `[[dataset]]` stanza. `path` is resolved relative to the manifest
/// file's directory at load time.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    pub path: PathBuf,
    /// Header names of the feature columns.
    pub features: Vec<String>,
    /// Header name of the label column, if any.
    #[serde(default)]
    pub label: Option<String>,
    /// Class count; the k handed to the baseline techniques.
    pub classes: usize,
    /// Cell contents treated as missing in feature columns.
    #[serde(default = "default_missing")]
    pub missing: Vec<String>,
    /// Single-character field delimiter.
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
}

fn default_missing() -> Vec<String> {
    CsvSchema::default_missing_markers()
}

fn default_delimiter() -> String {
    ",".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    #[serde(default)]
    dataset: Vec<DatasetEntry>,
}

impl DatasetEntry {
    /// The CSV schema this stanza describes.
    pub fn schema(&self) -> CsvSchema {
        let mut schema = CsvSchema {
            feature_columns: self.features.iter().map(|f| f.as_str().into()).collect(),
            label_column: None,
            missing_markers: self.missing.clone(),
            delimiter: self.delimiter.as_bytes()[0],
        };
        if let Some(label) = &self.label {
            schema = schema.with_label(label.as_str());
        }
        schema
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.name.trim().is_empty() {
            return Err(CliError::Data("manifest: dataset with empty name".into()));
        }
        if self.features.is_empty() {
            return Err(CliError::Data(format!(
                "manifest: dataset {:?} lists no feature columns",
                self.name
            )));
        }
        if self.classes == 0 {
            return Err(CliError::Data(format!(
                "manifest: dataset {:?} declares zero classes",
                self.name
            )));
        }
        if self.delimiter.len() != 1 || !self.delimiter.is_ascii() {
            return Err(CliError::Data(format!(
                "manifest: dataset {:?} has delimiter {:?}; expected one ASCII character",
                self.name, self.delimiter
            )));
        }
        Ok(())
    }
}

/// Parse and validate a manifest, resolving dataset paths relative to the
/// manifest's own directory.
pub fn load_manifest(path: &Path) -> Result<Vec<DatasetEntry>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("failed to read {}: {e}", path.display())))?;
    let parsed: ManifestFile = toml::from_str(&text)
        .map_err(|e| CliError::Data(format!("{} is not a valid manifest: {e}", path.display())))?;
    if parsed.dataset.is_empty() {
        return Err(CliError::Data(format!(
            "{} declares no [[dataset]] stanzas",
            path.display()
        )));
    }

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = parsed.dataset;
    for entry in &mut entries {
        entry.validate()?;
        if entry.path.is_relative() {
            entry.path = base.join(&entry.path);
        }
    }

    let mut names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    if let Some(dup) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Data(format!(
            "manifest: dataset name {:?} appears more than once",
            dup[0]
        )));
    }
    Ok(entries)
}
