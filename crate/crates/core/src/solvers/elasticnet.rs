//! ElasticNet linear regression via cyclic coordinate descent.
//!
//! Objective, with n = number of rows:
//!
//! ```text
//! (1/(2n))·‖y − Xβ − b‖² + alpha·( l1_ratio·‖β‖₁ + (1 − l1_ratio)/2·‖β‖² )
//! ```
//!
//! The intercept b is unpenalized and handled by centering. The 1/(2n)
//! normalization keeps alpha grids transferable across dataset sizes.

use ndarray::{Array1, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fitted linear regression with its ElasticNet hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub alpha: f64,
    pub l1_ratio: f64,
    pub converged: bool,
}

impl LinearModel {
    pub fn predict(&self, x: ArrayView2<f64>) -> Array1<f64> {
        let w = Array1::from(self.weights.clone());
        x.dot(&w) + self.intercept
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(row.iter())
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + self.intercept
    }

    /// Intercept-only model (all weights zero), used for degenerate targets.
    pub fn intercept_only(n_features: usize, intercept: f64) -> Self {
        LinearModel {
            weights: vec![0.0; n_features],
            intercept,
            alpha: 0.0,
            l1_ratio: 0.0,
            converged: true,
        }
    }
}

fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// Full objective value for a candidate model; exposed so callers and tests
/// can check the descent property directly.
pub fn elasticnet_objective(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    model: &LinearModel,
) -> f64 {
    let n = x.nrows() as f64;
    let resid = &y.to_owned() - &model.predict(x);
    let sse: f64 = resid.iter().map(|r| r * r).sum();
    let l1: f64 = model.weights.iter().map(|w| w.abs()).sum();
    let l2: f64 = model.weights.iter().map(|w| w * w).sum();
    sse / (2.0 * n) + model.alpha * (model.l1_ratio * l1 + 0.5 * (1.0 - model.l1_ratio) * l2)
}

/// Fit by cyclic coordinate descent with soft-thresholding, starting from
/// zero weights, until the largest absolute coefficient change in a sweep
/// drops below `tol` or `max_iter` sweeps elapse.
pub fn elasticnet_fit(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    alpha: f64,
    l1_ratio: f64,
    tol: f64,
    max_iter: usize,
) -> Result<LinearModel> {
    let n = x.nrows();
    let p = x.ncols();
    if n != y.len() || n < 2 {
        return Err(Error::Invalid(format!(
            "elasticnet_fit: need rows(X) = len(y) >= 2, got {} and {}",
            n,
            y.len()
        )));
    }
    if alpha < 0.0 || !(0.0..=1.0).contains(&l1_ratio) {
        return Err(Error::Invalid(format!(
            "elasticnet_fit: alpha must be >= 0 and l1_ratio in [0,1], got {} and {}",
            alpha, l1_ratio
        )));
    }
    if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("elasticnet_fit: non-finite input".into()));
    }

    let nf = n as f64;
    let x_mean: Array1<f64> = x.mean_axis(ndarray::Axis(0)).unwrap();
    let y_mean = y.sum() / nf;
    let xc = &x.to_owned() - &x_mean;
    let yc = &y.to_owned() - y_mean;

    // per-column squared norms of the centered design
    let col_sq: Vec<f64> = xc.columns().into_iter().map(|c| c.dot(&c)).collect();

    let mut beta = Array1::<f64>::zeros(p);
    let mut resid = yc.clone();
    let l1_pen = alpha * l1_ratio;
    let l2_pen = alpha * (1.0 - l1_ratio);
    let mut converged = false;

    #[cfg(debug_assertions)]
    let mut prev_obj = f64::INFINITY;

    for _sweep in 0..max_iter {
        let mut max_delta = 0.0f64;
        for j in 0..p {
            if col_sq[j] == 0.0 {
                continue;
            }
            let xj = xc.column(j);
            let old = beta[j];
            // partial residual correlation with coordinate j restored
            let rho = xj.dot(&resid) / nf + (col_sq[j] / nf) * old;
            let new = soft_threshold(rho, l1_pen) / (col_sq[j] / nf + l2_pen);
            if new != old {
                resid.scaled_add(old - new, &xj);
                beta[j] = new;
                max_delta = max_delta.max((new - old).abs());
            }
        }

        #[cfg(debug_assertions)]
        {
            // descent property: the objective never increases across sweeps
            let probe = LinearModel {
                weights: beta.to_vec(),
                intercept: y_mean - x_mean.dot(&beta),
                alpha,
                l1_ratio,
                converged: false,
            };
            let obj = elasticnet_objective(x, y, &probe);
            debug_assert!(
                obj <= prev_obj + 1e-10 * prev_obj.abs().max(1.0),
                "coordinate descent objective increased: {} -> {}",
                prev_obj,
                obj
            );
            prev_obj = obj;
        }

        if max_delta < tol {
            converged = true;
            break;
        }
    }

    let intercept = y_mean - x_mean.dot(&beta);
    Ok(LinearModel {
        weights: beta.to_vec(),
        intercept,
        alpha,
        l1_ratio,
        converged,
    })
}

/// Ordinary least squares with a small ridge for conditioning; used by the
/// unilingual baseline and as the unpenalized limit in tests.
pub fn ridge_least_squares(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    ridge: f64,
) -> Result<LinearModel> {
    let n = x.nrows();
    if n != y.len() || n < 2 {
        return Err(Error::Invalid(
            "ridge_least_squares: need rows(X) = len(y) >= 2".into(),
        ));
    }
    let nf = n as f64;
    let x_mean: Array1<f64> = x.mean_axis(ndarray::Axis(0)).unwrap();
    let y_mean = y.sum() / nf;
    let xc = &x.to_owned() - &x_mean;
    let yc = &y.to_owned() - y_mean;
    let gram = xc.t().dot(&xc);
    let rhs = xc.t().dot(&yc);
    let rhs2 = rhs.insert_axis(ndarray::Axis(1));
    let beta = super::linalg::ridge_solve(gram.view(), rhs2.view(), ridge)?;
    let beta: Array1<f64> = beta.column(0).to_owned();
    let intercept = y_mean - x_mean.dot(&beta);
    Ok(LinearModel {
        weights: beta.to_vec(),
        intercept,
        alpha: 0.0,
        l1_ratio: 0.0,
        converged: true,
    })
}
