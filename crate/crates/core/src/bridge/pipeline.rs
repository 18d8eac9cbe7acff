//! The serialized end-to-end scorer: pruning masks, CFG vocabularies, the
//! correspondence model, the selected top-K target features, and the
//! dementia classifier.

use std::path::Path;

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::corpus::{FrequencyLexicon, Narration};
use crate::error::{Error, Result};
use crate::featx::extract::extract_mandarin;
use crate::featx::matrix::{FeatureMatrix, FeatureVector};
use crate::featx::prune::PruneMask;
use crate::featx::vocab::CfgVocabulary;
use crate::solvers::{cv_logistic, CvReport, LogisticModel, LogisticPoint};

use super::correspondence::CorrespondenceModel;

pub const PIPELINE_FORMAT_VERSION: u32 = 1;

/// Extraction-side artifacts carried along so the pipeline can score raw
/// narrations. In feature-matrix mode the vocabularies are absent and the
/// masks may be identities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineParts {
    pub source_prune: PruneMask,
    pub target_prune: PruneMask,
    pub cfg_vocab_src: Option<CfgVocabulary>,
    pub cfg_vocab_tgt: Option<CfgVocabulary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineModel {
    pub format_version: u32,
    pub source_prune: PruneMask,
    pub target_prune: PruneMask,
    pub cfg_vocab_src: Option<CfgVocabulary>,
    pub cfg_vocab_tgt: Option<CfgVocabulary>,
    pub correspondence: CorrespondenceModel,
    /// top-K target names in descending train-R² order
    pub selected_targets: Vec<String>,
    pub classifier: LogisticModel,
    pub classifier_cv: CvReport<LogisticPoint>,
    pub k: usize,
}

/// Default fold count for classifier strength selection.
pub const CLASSIFIER_K_FOLDS: usize = 5;

/// Select the top-k targets by correspondence training R² (ties by name),
/// retrain the classifier on those columns of the labeled matrix with
/// 5-fold strength selection, and assemble the pipeline.
pub fn joint_feature_select(
    parts: &PipelineParts,
    corr: &CorrespondenceModel,
    db_x: &FeatureMatrix,
    db_y: ArrayView1<f64>,
    k: usize,
    seed: u64,
    c_grid: &[LogisticPoint],
) -> Result<PipelineModel> {
    joint_feature_select_with_folds(parts, corr, db_x, db_y, k, seed, c_grid, CLASSIFIER_K_FOLDS)
}

/// [`joint_feature_select`] with an explicit classifier fold count.
#[allow(clippy::too_many_arguments)]
pub fn joint_feature_select_with_folds(
    parts: &PipelineParts,
    corr: &CorrespondenceModel,
    db_x: &FeatureMatrix,
    db_y: ArrayView1<f64>,
    k: usize,
    seed: u64,
    c_grid: &[LogisticPoint],
    k_folds: usize,
) -> Result<PipelineModel> {
    let ranked = corr.ranked_targets();
    if k == 0 || k > ranked.len() {
        return Err(Error::Invalid(format!(
            "k must be in 1..={}, got {}",
            ranked.len(),
            k
        )));
    }
    if db_x.n_rows() != db_y.len() {
        return Err(Error::Invalid(format!(
            "labeled matrix has {} rows but {} labels",
            db_x.n_rows(),
            db_y.len()
        )));
    }
    let selected: Vec<String> = ranked[..k].iter().map(|(n, _)| n.clone()).collect();
    let restricted = db_x.select(&selected)?;
    let (classifier_cv, classifier) = cv_logistic(
        restricted.data.view(),
        db_y,
        c_grid,
        k_folds,
        seed,
        1e-7,
        5_000,
    )?;
    Ok(PipelineModel {
        format_version: PIPELINE_FORMAT_VERSION,
        source_prune: parts.source_prune.clone(),
        target_prune: parts.target_prune.clone(),
        cfg_vocab_src: parts.cfg_vocab_src.clone(),
        cfg_vocab_tgt: parts.cfg_vocab_tgt.clone(),
        correspondence: corr.clone(),
        selected_targets: selected,
        classifier,
        classifier_cv,
        k,
    })
}

impl PipelineModel {
    /// Score one raw source-space feature vector. Returns the dementia
    /// probability and the full mapped target-space vector for audit.
    pub fn predict_vector(&self, x_raw: &FeatureVector) -> Result<(f64, FeatureVector)> {
        let kept: Vec<f64> = {
            let mut vals = Vec::with_capacity(self.source_prune.kept.len());
            let mut missing = Vec::new();
            for name in &self.source_prune.kept {
                match x_raw.get(name) {
                    Some(v) => vals.push(v),
                    None => missing.push(name.clone()),
                }
            }
            if !missing.is_empty() {
                return Err(Error::NameMismatch {
                    missing,
                    extra: vec![],
                });
            }
            vals
        };
        let pruned = FeatureVector::new(self.source_prune.kept.clone(), kept)?;
        let mapped = self.correspondence.map_vector(&pruned)?;
        let row: Vec<f64> = self
            .selected_targets
            .iter()
            .map(|n| mapped.get(n).expect("selected target missing from mapped vector"))
            .collect();
        let proba = self.classifier.predict_proba_row(&row);
        Ok((proba, mapped))
    }

    /// Score every row of a raw source-space matrix.
    pub fn predict_matrix(&self, x_raw: &FeatureMatrix) -> Result<(Array1<f64>, FeatureMatrix)> {
        let pruned = self.source_prune.apply(x_raw)?;
        let mapped = self.correspondence.map_matrix(&pruned)?;
        let selected = mapped.select(&self.selected_targets)?;
        let probs = self.classifier.predict_proba(selected.data.view());
        Ok((probs, mapped))
    }
}

/// Extract Mandarin features for a narration and score it through the
/// pipeline: prune → correspondence → top-K restriction → classifier.
pub fn predict_dementia(
    pipeline: &PipelineModel,
    narration: &Narration,
    lexicon: &FrequencyLexicon,
) -> Result<(f64, FeatureVector)> {
    let vocab = pipeline.cfg_vocab_src.as_ref().ok_or_else(|| {
        Error::Invalid(
            "pipeline carries no source CFG vocabulary; it was trained in feature-matrix mode"
                .into(),
        )
    })?;
    let features = extract_mandarin(narration, lexicon, vocab)?;
    pipeline.predict_vector(&features)
}

pub fn save_pipeline(pipeline: &PipelineModel, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(pipeline)
        .map_err(|e| Error::Invalid(format!("pipeline serialization failed: {e}")))?;
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn load_pipeline(path: &Path) -> Result<PipelineModel> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    // check the version before strict decoding so mismatches are reported
    // as versions, not as missing fields
    #[derive(Deserialize)]
    struct VersionProbe {
        format_version: u32,
    }
    let probe: VersionProbe = serde_json::from_str(&content).map_err(|e| Error::Malformed {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })?;
    if probe.format_version != PIPELINE_FORMAT_VERSION {
        return Err(Error::Version {
            found: probe.format_version,
            expected: PIPELINE_FORMAT_VERSION,
        });
    }
    serde_json::from_str(&content).map_err(|e| Error::Malformed {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })
}
