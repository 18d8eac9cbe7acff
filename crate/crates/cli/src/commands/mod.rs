pub mod ablate;
pub mod evaluate;
pub mod extract;
pub mod synth;
pub mod train;

use std::path::{Path, PathBuf};

use ndarray::Array1;

use crate::CliError;
use lexbridge::corpus::Label;
use lexbridge::eval::DementiaScores;
use lexbridge::FeatureMatrix;

/// Fetch a required config path, naming the missing key in the error.
pub fn require_path<'a>(
    value: &'a Option<PathBuf>,
    key: &str,
) -> Result<&'a Path, CliError> {
    let path = value
        .as_deref()
        .ok_or_else(|| CliError::validation(format!("config is missing [data].{key}")))?;
    if !path.exists() {
        return Err(CliError::validation(format!(
            "[data].{key} path does not exist: {}",
            path.display()
        )));
    }
    Ok(path)
}

pub fn read_matrix(path: &Path) -> Result<FeatureMatrix, CliError> {
    Ok(FeatureMatrix::read_csv(path)?)
}

/// Labels CSV aligned to a feature matrix's row ids (1.0 = dementia).
pub fn labels_for_matrix(
    matrix: &FeatureMatrix,
    labels_path: &Path,
) -> Result<Array1<f64>, CliError> {
    let pairs = lexbridge::corpus::load_labels(labels_path)?;
    let map: std::collections::HashMap<&str, Label> = pairs
        .iter()
        .map(|(id, l)| (id.as_str(), *l))
        .collect();
    let mut out = Vec::with_capacity(matrix.ids.len());
    for id in &matrix.ids {
        match map.get(id.as_str()) {
            Some(Label::Dementia) => out.push(1.0),
            Some(Label::Control) => out.push(0.0),
            None => {
                return Err(CliError::validation(format!(
                    "no label for narration '{id}' in {}",
                    labels_path.display()
                )))
            }
        }
    }
    Ok(Array1::from(out))
}

/// Severities CSV: header `patient_id,severity`, one row per patient.
pub fn load_severities(path: &Path) -> Result<DementiaScores, CliError> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {}", path.display(), e)))?;
    let mut entries = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "patient_id,severity" {
                return Err(CliError::validation(format!(
                    "{}:{}: header must be patient_id,severity",
                    path.display(),
                    lineno + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let (id, val) = line.split_once(',').ok_or_else(|| {
            CliError::validation(format!("{}:{}: expected patient_id,severity", path.display(), lineno + 1))
        })?;
        let sev: f64 = val.trim().parse().map_err(|_| {
            CliError::validation(format!("{}:{}: bad severity '{}'", path.display(), lineno + 1, val))
        })?;
        entries.push((id.to_string(), sev));
    }
    if entries.len() < 2 {
        return Err(CliError::validation(format!(
            "{}: need at least 2 severity rows",
            path.display()
        )));
    }
    Ok(DementiaScores::from_pairs(entries, "loaded from severities CSV"))
}

/// Resolve severity ground truth: a severities CSV takes precedence, else a
/// task-score CSV is collapsed through PCA.
pub fn resolve_scores(config: &crate::config::RunConfig) -> Result<DementiaScores, CliError> {
    if let Some(p) = &config.data.severities {
        return load_severities(require_path(&config.data.severities, "severities").map(|_| p.as_path())?);
    }
    if config.data.task_scores.is_some() {
        let path = require_path(&config.data.task_scores, "task_scores")?;
        let table = lexbridge::corpus::load_task_scores(path)?;
        return Ok(lexbridge::eval::derive_dementia_scores(&table)?);
    }
    Err(CliError::validation(
        "config needs [data].severities or [data].task_scores",
    ))
}

/// Severities aligned to a matrix's row order, erroring on missing patients.
pub fn severities_for_matrix(
    matrix: &FeatureMatrix,
    scores: &DementiaScores,
) -> Result<Vec<f64>, CliError> {
    matrix
        .ids
        .iter()
        .map(|id| {
            scores
                .get(id)
                .ok_or_else(|| CliError::validation(format!("no severity score for patient '{id}'")))
        })
        .collect()
}
