//! Ground-truth severity derivation: first principal component of the task
//! scores, negated so that better task performance means lower severity.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::corpus::TaskScoreTable;
use crate::error::{Error, Result};
use crate::solvers::pca_first_component;

/// Per-patient severity with the sign convention recorded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DementiaScores {
    pub entries: Vec<(String, f64)>,
    pub orientation: String,
}

impl DementiaScores {
    pub fn get(&self, patient_id: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(id, _)| id == patient_id)
            .map(|(_, v)| *v)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, v)| *v).collect()
    }

    pub fn from_pairs(entries: Vec<(String, f64)>, orientation: &str) -> Self {
        DementiaScores {
            entries,
            orientation: orientation.to_string(),
        }
    }
}

pub const SEVERITY_ORIENTATION: &str =
    "severity = negated first principal component of standardized task scores; higher task performance => lower severity";

/// PCA over the score matrix, oriented toward performance, then negated
/// into a severity.
pub fn derive_dementia_scores(table: &TaskScoreTable) -> Result<DementiaScores> {
    let n = table.patient_ids.len();
    let t = table.task_names.len();
    if n < 2 || t < 1 {
        return Err(Error::Invalid(format!(
            "derive_dementia_scores needs >= 2 patients and >= 1 task, got {} and {}",
            n, t
        )));
    }
    let mut m = Array2::<f64>::zeros((n, t));
    for (i, row) in table.rows.iter().enumerate() {
        if row.len() != t {
            return Err(Error::Invalid(format!(
                "patient {} has {} scores for {} tasks",
                table.patient_ids[i],
                row.len(),
                t
            )));
        }
        for (j, v) in row.iter().enumerate() {
            m[[i, j]] = *v;
        }
    }
    let pca = pca_first_component(m.view())?;
    let entries = table
        .patient_ids
        .iter()
        .zip(pca.scores.iter())
        .map(|(id, s)| (id.clone(), -s))
        .collect();
    Ok(DementiaScores {
        entries,
        orientation: SEVERITY_ORIENTATION.to_string(),
    })
}
