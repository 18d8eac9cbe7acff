//! The K-sweep: for every prefix size K of the R²-ranked target list,
//! retrain the classifier on the top-K columns and record its CV accuracy,
//! plus the end-to-end Spearman ρ when evaluation data is supplied.

use ndarray::ArrayView1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::spearman_rho;
use crate::featx::matrix::FeatureMatrix;
use crate::solvers::{cv_logistic, LogisticPoint};

use super::correspondence::CorrespondenceModel;
use super::pipeline::PipelineParts;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KSweepRow {
    pub k: usize,
    pub db_cv_accuracy: f64,
    /// absent when no evaluation data was supplied or the ranking was
    /// degenerate (constant probabilities)
    pub spearman: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KSweepCurve {
    pub rows: Vec<KSweepRow>,
}

impl KSweepCurve {
    /// K achieving the best Spearman ρ (ties toward smaller K), if any row
    /// has one.
    pub fn best_k_by_spearman(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for row in &self.rows {
            if let Some(rho) = row.spearman {
                if best.is_none_or(|(_, b)| rho > b) {
                    best = Some((row.k, rho));
                }
            }
        }
        best
    }

    /// K achieving the best classifier CV accuracy (ties toward smaller K).
    pub fn best_k_by_accuracy(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for row in &self.rows {
            if best.is_none_or(|(_, b)| row.db_cv_accuracy > b) {
                best = Some((row.k, row.db_cv_accuracy));
            }
        }
        best
    }

    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("k,db_accuracy,spearman\n");
        for row in &self.rows {
            match row.spearman {
                Some(rho) => out.push_str(&format!("{},{},{}\n", row.k, row.db_cv_accuracy, rho)),
                None => out.push_str(&format!("{},{},\n", row.k, row.db_cv_accuracy)),
            }
        }
        out
    }
}

/// Run the sweep for K in 1..=|targets|. The mapped evaluation matrix is
/// computed once; each K restricts it to the ranked prefix.
pub fn sweep_k(
    parts: &PipelineParts,
    corr: &CorrespondenceModel,
    db_x: &FeatureMatrix,
    db_y: ArrayView1<f64>,
    eval: Option<(&FeatureMatrix, &[f64])>,
    seed: u64,
    c_grid: &[LogisticPoint],
) -> Result<KSweepCurve> {
    sweep_k_with_folds(
        parts,
        corr,
        db_x,
        db_y,
        eval,
        seed,
        c_grid,
        super::pipeline::CLASSIFIER_K_FOLDS,
    )
}

/// [`sweep_k`] with an explicit classifier fold count.
#[allow(clippy::too_many_arguments)]
pub fn sweep_k_with_folds(
    _parts: &PipelineParts,
    corr: &CorrespondenceModel,
    db_x: &FeatureMatrix,
    db_y: ArrayView1<f64>,
    eval: Option<(&FeatureMatrix, &[f64])>,
    seed: u64,
    c_grid: &[LogisticPoint],
    k_folds: usize,
) -> Result<KSweepCurve> {
    let ranked = corr.ranked_targets();
    let ranked_names: Vec<String> = ranked.iter().map(|(n, _)| n.clone()).collect();
    // reorder once so the top-K restriction is a prefix slice
    let db_ranked = db_x.select(&ranked_names)?;
    let mapped_eval = match eval {
        Some((eval_x, _)) => Some(corr.map_matrix(eval_x)?.select(&ranked_names)?),
        None => None,
    };

    let rows: Vec<Result<KSweepRow>> = (1..=ranked_names.len())
        .into_par_iter()
        .map(|k| {
            let db_slice = db_ranked.data.slice(ndarray::s![.., ..k]);
            let (report, classifier) =
                cv_logistic(db_slice, db_y, c_grid, k_folds, seed, 1e-7, 5_000)?;
            let spearman = match (&mapped_eval, eval) {
                (Some(me), Some((_, severities))) => {
                    let probs = classifier.predict_proba(me.data.slice(ndarray::s![.., ..k]));
                    match spearman_rho(probs.as_slice().unwrap(), severities) {
                        Ok(rho) => Some(rho),
                        Err(crate::error::Error::DegenerateRanking(_)) => None,
                        Err(e) => return Err(e),
                    }
                }
                _ => None,
            };
            Ok(KSweepRow {
                k,
                db_cv_accuracy: report.best_score(),
                spearman,
            })
        })
        .collect();
    let rows: Vec<KSweepRow> = rows.into_iter().collect::<Result<_>>()?;
    Ok(KSweepCurve { rows })
}
