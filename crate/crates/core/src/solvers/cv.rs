//! K-fold cross-validated grid search with deterministic fold assignment.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::elasticnet::{elasticnet_fit, LinearModel};
use crate::solvers::logistic::{logistic_l1_fit, LogisticModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CvMetric {
    /// mean squared error, minimized
    Mse,
    /// classification accuracy at the 0.5 threshold, maximized
    Accuracy,
}

/// A point in a hyperparameter grid. `prefer_over` breaks exact score ties
/// toward the more regularized point so selections stay deterministic.
pub trait GridPoint: Clone {
    fn prefer_over(&self, other: &Self) -> bool;
}

/// ElasticNet hyperparameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticNetPoint {
    pub alpha: f64,
    pub l1_ratio: f64,
}

impl GridPoint for ElasticNetPoint {
    fn prefer_over(&self, other: &Self) -> bool {
        if self.alpha != other.alpha {
            return self.alpha > other.alpha;
        }
        self.l1_ratio > other.l1_ratio
    }
}

/// Inverse L1 strength for the logistic classifier; smaller is stronger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticPoint {
    pub c_inv_reg: f64,
}

impl GridPoint for LogisticPoint {
    fn prefer_over(&self, other: &Self) -> bool {
        self.c_inv_reg < other.c_inv_reg
    }
}

/// Grid scores for one search: mean fold score per point, the winning point,
/// and the seed that fixed the fold assignment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvReport<P> {
    pub points: Vec<P>,
    pub mean_scores: Vec<f64>,
    pub best_index: usize,
    pub metric: CvMetric,
    pub k_folds: usize,
    pub seed: u64,
}

impl<P: Clone> CvReport<P> {
    pub fn best_point(&self) -> P {
        self.points[self.best_index].clone()
    }

    pub fn best_score(&self) -> f64 {
        self.mean_scores[self.best_index]
    }
}

/// Deterministic shuffled partition of `0..n` into `k` near-equal folds.
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Invalid(format!("k_folds must be >= 2, got {}", k)));
    }
    if n < k {
        return Err(Error::Invalid(format!(
            "need at least k_folds = {} rows, got {}",
            k, n
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut at = 0usize;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(order[at..at + len].to_vec());
        at += len;
    }
    Ok(folds)
}

/// Generic harness: `eval` receives (point, train rows, test rows) and
/// returns the fold score under `metric`'s orientation.
pub fn cv_grid_search<P, F>(
    n_rows: usize,
    grid: &[P],
    k_folds: usize,
    seed: u64,
    metric: CvMetric,
    mut eval: F,
) -> Result<CvReport<P>>
where
    P: GridPoint,
    F: FnMut(&P, &[usize], &[usize]) -> Result<f64>,
{
    if grid.is_empty() {
        return Err(Error::Invalid("cv_grid_search: empty grid".into()));
    }
    let folds = kfold_indices(n_rows, k_folds, seed)?;
    let mut mean_scores = Vec::with_capacity(grid.len());
    for point in grid {
        let mut total = 0.0;
        for f in 0..k_folds {
            let test = &folds[f];
            let train: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != f)
                .flat_map(|(_, v)| v.iter().copied())
                .collect();
            total += eval(point, &train, test)?;
        }
        mean_scores.push(total / k_folds as f64);
    }

    let mut best = 0usize;
    for i in 1..grid.len() {
        let better = match metric {
            CvMetric::Mse => mean_scores[i] < mean_scores[best],
            CvMetric::Accuracy => mean_scores[i] > mean_scores[best],
        };
        let tied = mean_scores[i] == mean_scores[best];
        if better || (tied && grid[i].prefer_over(&grid[best])) {
            best = i;
        }
    }

    Ok(CvReport {
        points: grid.to_vec(),
        mean_scores,
        best_index: best,
        metric,
        k_folds,
        seed,
    })
}

pub(crate) fn take_rows(x: ArrayView2<f64>, rows: &[usize]) -> Array2<f64> {
    x.select(Axis(0), rows)
}

pub(crate) fn take_vals(y: ArrayView1<f64>, rows: &[usize]) -> Array1<f64> {
    Array1::from_iter(rows.iter().map(|&i| y[i]))
}

/// Grid-search an ElasticNet by k-fold MSE, then refit the winner on all rows.
pub fn cv_elasticnet(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    grid: &[ElasticNetPoint],
    k_folds: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<(CvReport<ElasticNetPoint>, LinearModel)> {
    let report = cv_grid_search(
        x.nrows(),
        grid,
        k_folds,
        seed,
        CvMetric::Mse,
        |point, train, test| {
            let xt = take_rows(x, train);
            let yt = take_vals(y, train);
            let model = elasticnet_fit(xt.view(), yt.view(), point.alpha, point.l1_ratio, tol, max_iter)?;
            let xv = take_rows(x, test);
            let pred = model.predict(xv.view());
            let mse = test
                .iter()
                .zip(pred.iter())
                .map(|(&i, p)| (y[i] - p) * (y[i] - p))
                .sum::<f64>()
                / test.len() as f64;
            Ok(mse)
        },
    )?;
    let best = report.best_point();
    let model = elasticnet_fit(x, y, best.alpha, best.l1_ratio, tol, max_iter)?;
    Ok((report, model))
}

/// Grid-search the L1 logistic classifier by k-fold accuracy, then refit.
pub fn cv_logistic(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    grid: &[LogisticPoint],
    k_folds: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<(CvReport<LogisticPoint>, LogisticModel)> {
    let report = cv_grid_search(
        x.nrows(),
        grid,
        k_folds,
        seed,
        CvMetric::Accuracy,
        |point, train, test| {
            let xt = take_rows(x, train);
            let yt = take_vals(y, train);
            // a fold may end up single-class; score it at the majority rate
            let pos = yt.iter().filter(|&&v| v == 1.0).count();
            if pos == 0 || pos == yt.len() {
                let label = if pos == 0 { 0.0 } else { 1.0 };
                let acc = test.iter().filter(|&&i| y[i] == label).count() as f64
                    / test.len() as f64;
                return Ok(acc);
            }
            let model = logistic_l1_fit(xt.view(), yt.view(), point.c_inv_reg, tol, max_iter)?;
            let xv = take_rows(x, test);
            let proba = model.predict_proba(xv.view());
            let correct = test
                .iter()
                .zip(proba.iter())
                .filter(|(&i, &p)| (p > 0.5) == (y[i] == 1.0))
                .count();
            Ok(correct as f64 / test.len() as f64)
        },
    )?;
    let best = report.best_point();
    let model = logistic_l1_fit(x, y, best.c_inv_reg, tol, max_iter)?;
    Ok((report, model))
}

/// Default hyperparameter grids used across the pipeline.
pub fn default_elasticnet_grid() -> Vec<ElasticNetPoint> {
    let alphas = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0];
    let l1s = [0.1, 0.5, 0.9, 1.0];
    let mut grid = Vec::with_capacity(alphas.len() * l1s.len());
    for &alpha in &alphas {
        for &l1_ratio in &l1s {
            grid.push(ElasticNetPoint { alpha, l1_ratio });
        }
    }
    grid
}

pub fn default_logistic_grid() -> Vec<LogisticPoint> {
    [0.01, 0.1, 1.0, 10.0]
        .iter()
        .map(|&c_inv_reg| LogisticPoint { c_inv_reg })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn folds_partition_rows_and_are_reproducible() {
        let a = kfold_indices(10, 3, 99).unwrap();
        let b = kfold_indices(10, 3, 99).unwrap();
        assert_eq!(a, b);
        let mut all: Vec<usize> = a.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(a.len(), 3);
        let c = kfold_indices(10, 3, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_point_grid_is_best() {
        let x = array![[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]];
        let y = array![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let grid = vec![ElasticNetPoint { alpha: 0.1, l1_ratio: 0.5 }];
        let (report, _m) = cv_elasticnet(x.view(), y.view(), &grid, 3, 1, 1e-8, 1000).unwrap();
        assert_eq!(report.best_index, 0);
    }

    #[test]
    fn duplicate_points_resolve_deterministically() {
        let x = array![[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]];
        let y = array![1.1, 1.9, 3.2, 3.8, 5.1, 5.9];
        let p = ElasticNetPoint { alpha: 0.01, l1_ratio: 1.0 };
        let grid = vec![p, p, p];
        let (report, _m) = cv_elasticnet(x.view(), y.view(), &grid, 3, 5, 1e-8, 1000).unwrap();
        assert_eq!(report.best_index, 0);
        assert!(report.mean_scores.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn noiseless_linear_data_prefers_tiny_alpha() {
        let x = array![
            [1.0],
            [2.0],
            [3.0],
            [4.0],
            [5.0],
            [6.0],
            [7.0],
            [8.0],
            [9.0]
        ];
        let y = array![2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0];
        let grid = vec![
            ElasticNetPoint { alpha: 0.001, l1_ratio: 0.5 },
            ElasticNetPoint { alpha: 100.0, l1_ratio: 0.5 },
        ];
        let (report, _m) = cv_elasticnet(x.view(), y.view(), &grid, 3, 2, 1e-10, 5000).unwrap();
        assert_eq!(report.best_point().alpha, 0.001);
    }

    #[test]
    fn ties_break_toward_more_regularization() {
        // constant target: every alpha achieves the same fold MSE, so the
        // tie rule must pick the largest alpha (and largest l1_ratio)
        let x = array![[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]];
        let y = array![5.0, 5.0, 5.0, 5.0, 5.0, 5.0];
        let grid = vec![
            ElasticNetPoint { alpha: 0.01, l1_ratio: 0.5 },
            ElasticNetPoint { alpha: 10.0, l1_ratio: 0.5 },
            ElasticNetPoint { alpha: 10.0, l1_ratio: 1.0 },
        ];
        let (report, _m) = cv_elasticnet(x.view(), y.view(), &grid, 3, 3, 1e-8, 1000).unwrap();
        assert_eq!(report.best_index, 2);
    }

    #[test]
    fn empty_grid_errors() {
        let r = cv_grid_search::<ElasticNetPoint, _>(6, &[], 3, 0, CvMetric::Mse, |_, _, _| Ok(0.0));
        assert!(r.is_err());
    }

    #[test]
    fn logistic_cv_selects_a_working_strength() {
        let x = array![
            [-2.0],
            [-1.5],
            [-1.0],
            [-0.5],
            [0.5],
            [1.0],
            [1.5],
            [2.0],
            [-1.8],
            [1.8]
        ];
        let y = array![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0];
        let grid = default_logistic_grid();
        let (report, model) = cv_logistic(x.view(), y.view(), &grid, 5, 7, 1e-8, 20_000).unwrap();
        assert!(report.best_score() > 0.9);
        let p = model.predict_proba(x.view());
        let acc = p
            .iter()
            .zip(y.iter())
            .filter(|(p, y)| (**p > 0.5) == (**y == 1.0))
            .count();
        assert_eq!(acc, 10);
    }
}
