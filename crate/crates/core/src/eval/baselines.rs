//! Baselines and pipeline evaluation against the severity ground truth.

use ndarray::Array1;

use crate::bridge::PipelineModel;
use crate::corpus::{FrequencyLexicon, Narration};
use crate::error::{Error, Result};
use crate::eval::scores::DementiaScores;
use crate::eval::spearman::spearman_rho;
use crate::featx::extract::extract_english;
use crate::featx::matrix::FeatureMatrix;
use crate::solvers::elasticnet::ridge_least_squares;
use crate::solvers::kfold_indices;

/// Source-language-only baseline: k-fold ridge least squares predicting the
/// severity from source features, scored by held-out Spearman ρ per fold,
/// averaged over folds.
pub fn unilingual_baseline(
    x_src: &FeatureMatrix,
    severities: &[f64],
    folds: usize,
    seed: u64,
) -> Result<f64> {
    if x_src.n_rows() != severities.len() {
        return Err(Error::Invalid(format!(
            "unilingual baseline: {} rows vs {} severities",
            x_src.n_rows(),
            severities.len()
        )));
    }
    let assignment = kfold_indices(x_src.n_rows(), folds, seed)?;
    let y = Array1::from(severities.to_vec());
    let mut total = 0.0;
    for f in 0..assignment.len() {
        let test = &assignment[f];
        if test.len() < 2 {
            return Err(Error::Invalid(format!(
                "unilingual baseline: fold {} has {} samples (need >= 2)",
                f,
                test.len()
            )));
        }
        let train: Vec<usize> = assignment
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != f)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        let xt = x_src.data.select(ndarray::Axis(0), &train);
        let yt = Array1::from_iter(train.iter().map(|&i| y[i]));
        let model = ridge_least_squares(xt.view(), yt.view(), 1e-6)?;
        let xv = x_src.data.select(ndarray::Axis(0), test);
        let pred = model.predict(xv.view());
        let truth: Vec<f64> = test.iter().map(|&i| y[i]).collect();
        total += spearman_rho(pred.as_slice().unwrap(), &truth)?;
    }
    Ok(total / assignment.len() as f64)
}

fn severities_for(ids: &[String], scores: &DementiaScores) -> Result<Vec<f64>> {
    ids.iter()
        .map(|id| {
            scores
                .get(id)
                .ok_or_else(|| Error::Invalid(format!("no severity score for patient '{}'", id)))
        })
        .collect()
}

/// Translate-route baseline: extract English features from externally
/// translated narrations and feed them straight to the pipeline's
/// classifier (target prune → selected columns → probability).
pub fn translate_baseline(
    pipeline: &PipelineModel,
    translated_en: &[Narration],
    lexicon_en: &FrequencyLexicon,
    scores: &DementiaScores,
) -> Result<f64> {
    let vocab = pipeline.cfg_vocab_tgt.as_ref().ok_or_else(|| {
        Error::Invalid("pipeline carries no target CFG vocabulary for the translate baseline".into())
    })?;
    if translated_en.is_empty() {
        return Err(Error::Invalid("translate baseline: no narrations".into()));
    }
    let mut probs = Vec::with_capacity(translated_en.len());
    let mut ids = Vec::with_capacity(translated_en.len());
    for n in translated_en {
        let features = extract_english(n, lexicon_en, vocab)?;
        let row: Vec<f64> = {
            let mut vals = Vec::with_capacity(pipeline.selected_targets.len());
            let mut missing = Vec::new();
            for name in &pipeline.selected_targets {
                match features.get(name) {
                    Some(v) => vals.push(v),
                    None => missing.push(name.clone()),
                }
            }
            if !missing.is_empty() {
                return Err(Error::NameMismatch { missing, extra: vec![] });
            }
            vals
        };
        probs.push(pipeline.classifier.predict_proba_row(&row));
        ids.push(n.id.clone());
    }
    let truth = severities_for(&ids, scores)?;
    spearman_rho(&probs, &truth)
}

/// End-to-end evaluation over source-language narrations: extract → map →
/// classify, then Spearman ρ of probabilities against severities. Narration
/// ids must match score patient ids.
pub fn evaluate_pipeline(
    pipeline: &PipelineModel,
    eval_narrations: &[Narration],
    lexicon: &FrequencyLexicon,
    scores: &DementiaScores,
) -> Result<f64> {
    if eval_narrations.is_empty() {
        return Err(Error::Invalid("evaluate_pipeline: no narrations".into()));
    }
    let mut probs = Vec::with_capacity(eval_narrations.len());
    let mut ids = Vec::with_capacity(eval_narrations.len());
    for n in eval_narrations {
        let (p, _) = crate::bridge::predict_dementia(pipeline, n, lexicon)?;
        probs.push(p);
        ids.push(n.id.clone());
    }
    let truth = severities_for(&ids, scores)?;
    spearman_rho(&probs, &truth)
}

/// Feature-matrix form of [`evaluate_pipeline`]: rows are raw source-space
/// vectors aligned with `severities`.
pub fn evaluate_pipeline_matrix(
    pipeline: &PipelineModel,
    eval_x: &FeatureMatrix,
    severities: &[f64],
) -> Result<f64> {
    if eval_x.n_rows() != severities.len() {
        return Err(Error::Invalid(format!(
            "evaluate_pipeline_matrix: {} rows vs {} severities",
            eval_x.n_rows(),
            severities.len()
        )));
    }
    let (probs, _) = pipeline.predict_matrix(eval_x)?;
    spearman_rho(probs.as_slice().unwrap(), severities)
}
