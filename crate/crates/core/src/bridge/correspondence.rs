//! The source→target feature correspondence: one grid-searched ElasticNet
//! per target feature, or a single rank-constrained linear map over all
//! targets at once.

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featx::matrix::{FeatureMatrix, FeatureVector};
use crate::solvers::{
    cv_elasticnet, kfold_indices, r2_score, rrr_fit, CvReport, ElasticNetPoint, LinearMap,
    LinearModel, Standardizer,
};

/// One target feature's regression, its training-set R², and the grid search
/// that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetRegression {
    pub name: String,
    pub model: LinearModel,
    pub train_r2: f64,
    /// absent for degenerate (constant) targets, which get an
    /// intercept-only model without a search
    pub cv: Option<CvReport<ElasticNetPoint>>,
    pub degenerate: bool,
}

/// Cross-validation trace for the reduced-rank route.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankSelection {
    /// (rank, mean CV MSE over all target entries)
    pub scores: Vec<(usize, f64)>,
    pub selected_rank: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CorrespondenceMode {
    Independent {
        targets: Vec<TargetRegression>,
    },
    ReducedRank {
        map: LinearMap,
        /// target-space standardizer fitted on the training matrix; inverted
        /// at prediction time so outputs live on the raw feature scale
        standardizer: Standardizer,
        selection: RankSelection,
        /// (target name, training R² from the joint fit)
        per_target_r2: Vec<(String, f64)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrespondenceModel {
    pub source_names: Vec<String>,
    pub target_names: Vec<String>,
    pub mode: CorrespondenceMode,
}

impl CorrespondenceModel {
    /// (target name, training R²) in target order.
    pub fn train_r2s(&self) -> Vec<(String, f64)> {
        match &self.mode {
            CorrespondenceMode::Independent { targets } => targets
                .iter()
                .map(|t| (t.name.clone(), t.train_r2))
                .collect(),
            CorrespondenceMode::ReducedRank { per_target_r2, .. } => per_target_r2.clone(),
        }
    }

    /// Targets sorted by descending training R², ties broken by name.
    pub fn ranked_targets(&self) -> Vec<(String, f64)> {
        let mut ranked = self.train_r2s();
        ranked.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        ranked
    }

    /// Dense (source-dim × target-dim) weight matrix plus intercepts on the
    /// raw target scale.
    fn dense_map(&self) -> (Array2<f64>, Array1<f64>) {
        let p = self.source_names.len();
        let q = self.target_names.len();
        match &self.mode {
            CorrespondenceMode::Independent { targets } => {
                let mut w = Array2::<f64>::zeros((p, q));
                let mut b = Array1::<f64>::zeros(q);
                for (j, t) in targets.iter().enumerate() {
                    for (i, wv) in t.model.weights.iter().enumerate() {
                        w[[i, j]] = *wv;
                    }
                    b[j] = t.model.intercept;
                }
                (w, b)
            }
            CorrespondenceMode::ReducedRank {
                map, standardizer, ..
            } => {
                // destandardize: y_raw = (x·B + c)·σ + μ
                let bstd = map.coefficient_array();
                let mut w = Array2::<f64>::zeros((p, q));
                let mut b = Array1::<f64>::zeros(q);
                for j in 0..q {
                    let s = standardizer.stds[j];
                    for i in 0..p {
                        w[[i, j]] = bstd[[i, j]] * s;
                    }
                    b[j] = map.intercepts[j] * s + standardizer.means[j];
                }
                (w, b)
            }
        }
    }

    fn check_names(&self, names: &[String]) -> Result<Vec<usize>> {
        let mut index = Vec::with_capacity(self.source_names.len());
        let mut missing = Vec::new();
        for n in &self.source_names {
            match names.iter().position(|m| m == n) {
                Some(i) => index.push(i),
                None => missing.push(n.clone()),
            }
        }
        let extra: Vec<String> = names
            .iter()
            .filter(|n| !self.source_names.contains(n))
            .cloned()
            .collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(Error::NameMismatch { missing, extra });
        }
        Ok(index)
    }

    /// Map one source vector into the full predicted target vector.
    pub fn map_vector(&self, x: &FeatureVector) -> Result<FeatureVector> {
        let index = self.check_names(&x.names)?;
        let ordered: Vec<f64> = index.iter().map(|&i| x.values[i]).collect();
        let (w, b) = self.dense_map();
        let xv = Array1::from(ordered);
        let y = xv.dot(&w) + &b;
        FeatureVector::new(self.target_names.clone(), y.to_vec())
    }

    /// Map every row of a source matrix; rows keep their ids.
    pub fn map_matrix(&self, x: &FeatureMatrix) -> Result<FeatureMatrix> {
        let index = self.check_names(&x.names)?;
        let ordered = x.data.select(ndarray::Axis(1), &index);
        let (w, b) = self.dense_map();
        let mut y = ordered.dot(&w);
        for mut row in y.rows_mut() {
            row += &b;
        }
        Ok(FeatureMatrix {
            ids: x.ids.clone(),
            names: self.target_names.clone(),
            data: y,
        })
    }
}

/// Standalone form of [`CorrespondenceModel::map_vector`].
pub fn map_features(model: &CorrespondenceModel, x: &FeatureVector) -> Result<FeatureVector> {
    model.map_vector(x)
}

fn check_aligned(x_src: &FeatureMatrix, y_tgt: &FeatureMatrix) -> Result<()> {
    if x_src.n_rows() != y_tgt.n_rows() {
        return Err(Error::Invalid(format!(
            "correspondence training needs aligned rows: {} source vs {} target",
            x_src.n_rows(),
            y_tgt.n_rows()
        )));
    }
    if x_src.n_rows() < 2 {
        return Err(Error::Invalid(
            "correspondence training needs at least 2 rows".into(),
        ));
    }
    Ok(())
}

fn column_is_constant(col: ndarray::ArrayView1<f64>) -> bool {
    let first = col[0];
    col.iter().all(|&v| v == first)
}

/// Train one independently grid-searched ElasticNet per target feature,
/// recording each target's training-set R². Constant targets degrade to
/// intercept-only models with R² = 0.
pub fn train_correspondence(
    x_src: &FeatureMatrix,
    y_tgt: &FeatureMatrix,
    grid: &[ElasticNetPoint],
    k_folds: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<CorrespondenceModel> {
    check_aligned(x_src, y_tgt)?;
    if grid.is_empty() {
        return Err(Error::Invalid("train_correspondence: empty grid".into()));
    }
    let x = x_src.data.view();
    let targets: Vec<Result<TargetRegression>> = (0..y_tgt.n_cols())
        .into_par_iter()
        .map(|j| {
            let name = y_tgt.names[j].clone();
            let col = y_tgt.data.column(j);
            if column_is_constant(col) {
                let n = x_src.n_cols();
                return Ok(TargetRegression {
                    name,
                    model: LinearModel::intercept_only(n, col[0]),
                    train_r2: 0.0,
                    cv: None,
                    degenerate: true,
                });
            }
            let y = col.to_owned();
            let (report, model) = cv_elasticnet(x, y.view(), grid, k_folds, seed, tol, max_iter)?;
            let pred = model.predict(x);
            let train_r2 = r2_score(y.view(), pred.view())?;
            Ok(TargetRegression {
                name,
                model,
                train_r2,
                cv: Some(report),
                degenerate: false,
            })
        })
        .collect();
    let targets: Vec<TargetRegression> = targets.into_iter().collect::<Result<_>>()?;
    Ok(CorrespondenceModel {
        source_names: x_src.names.clone(),
        target_names: y_tgt.names.clone(),
        mode: CorrespondenceMode::Independent { targets },
    })
}

/// Train the reduced-rank route: standardize targets, pick the rank by
/// k-fold total MSE (ties toward the smaller rank), refit on all rows, and
/// record per-target training R² from the joint fit.
pub fn train_correspondence_rrr(
    x_src: &FeatureMatrix,
    y_tgt: &FeatureMatrix,
    rank_grid: &[usize],
    k_folds: usize,
    seed: u64,
) -> Result<CorrespondenceModel> {
    check_aligned(x_src, y_tgt)?;
    if rank_grid.is_empty() {
        return Err(Error::Invalid("train_correspondence_rrr: empty rank grid".into()));
    }
    let (y_std, standardizer) = Standardizer::fit(y_tgt.data.view())?;
    let x = &x_src.data;

    let folds = kfold_indices(x_src.n_rows(), k_folds, seed)?;
    let mut scores = Vec::with_capacity(rank_grid.len());
    for &rank in rank_grid {
        if rank == 0 {
            return Err(Error::Invalid("rank grid contains 0".into()));
        }
        let mut total = 0.0;
        for f in 0..folds.len() {
            let test = &folds[f];
            let train: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != f)
                .flat_map(|(_, v)| v.iter().copied())
                .collect();
            let xt = x.select(ndarray::Axis(0), &train);
            let yt = y_std.select(ndarray::Axis(0), &train);
            let map = rrr_fit(xt.view(), yt.view(), rank)?;
            let xv = x.select(ndarray::Axis(0), test);
            let yv = y_std.select(ndarray::Axis(0), test);
            let pred = map.predict(xv.view());
            let mse = (&pred - &yv).mapv(|e| e * e).mean().unwrap();
            total += mse;
        }
        scores.push((rank, total / folds.len() as f64));
    }
    let mut best = 0usize;
    for i in 1..scores.len() {
        let better = scores[i].1 < scores[best].1;
        let tied_smaller = scores[i].1 == scores[best].1 && scores[i].0 < scores[best].0;
        if better || tied_smaller {
            best = i;
        }
    }
    let selected_rank = scores[best].0;

    let map = rrr_fit(x.view(), y_std.view(), selected_rank)?;
    let fitted = map.predict(x.view());
    let per_target_r2: Vec<(String, f64)> = y_tgt
        .names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let r2 = r2_score(y_std.column(j), fitted.column(j)).unwrap_or(0.0);
            (name.clone(), r2)
        })
        .collect();

    Ok(CorrespondenceModel {
        source_names: x_src.names.clone(),
        target_names: y_tgt.names.clone(),
        mode: CorrespondenceMode::ReducedRank {
            map,
            standardizer,
            selection: RankSelection {
                scores,
                selected_rank,
                seed,
            },
            per_target_r2,
        },
    })
}
