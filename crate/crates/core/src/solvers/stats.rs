//! Column standardization and the coefficient of determination.

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-column mean/std transform fitted on a training matrix.
///
/// Zero-variance columns get std = 1 so the transform stays total; they are
/// flagged so callers can report them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub zero_variance: Vec<bool>,
}

impl Standardizer {
    /// Fit on `x` (population std) and return the transformed matrix.
    pub fn fit(x: ArrayView2<f64>) -> Result<(Array2<f64>, Standardizer)> {
        let n = x.nrows();
        if n < 2 {
            return Err(Error::Invalid(format!(
                "standardize requires at least 2 rows, got {}",
                n
            )));
        }
        let mut means = Vec::with_capacity(x.ncols());
        let mut stds = Vec::with_capacity(x.ncols());
        let mut flags = Vec::with_capacity(x.ncols());
        for col in x.columns() {
            let mean = col.sum() / n as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            let std = var.sqrt();
            let degenerate = std.is_nan() || std <= 1e-12 * mean.abs().max(1.0);
            means.push(mean);
            stds.push(if degenerate { 1.0 } else { std });
            flags.push(degenerate);
        }
        let s = Standardizer {
            means,
            stds,
            zero_variance: flags,
        };
        let out = s.apply(x)?;
        Ok((out, s))
    }

    pub fn apply(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.means.len() {
            return Err(Error::Invalid(format!(
                "standardizer fitted on {} columns, got {}",
                self.means.len(),
                x.ncols()
            )));
        }
        let mut out = x.to_owned();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|v| (v - self.means[j]) / self.stds[j]);
        }
        Ok(out)
    }

    pub fn invert(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.means.len() {
            return Err(Error::Invalid(format!(
                "standardizer fitted on {} columns, got {}",
                self.means.len(),
                x.ncols()
            )));
        }
        let mut out = x.to_owned();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|v| v * self.stds[j] + self.means[j]);
        }
        Ok(out)
    }
}

/// Coefficient of determination 1 − SS_res/SS_tot; 0 when SS_tot = 0.
pub fn r2_score(y_true: ArrayView1<f64>, y_pred: ArrayView1<f64>) -> Result<f64> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Invalid(format!(
            "r2_score length mismatch: {} vs {}",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.len() < 2 {
        return Err(Error::Invalid("r2_score needs at least 2 values".into()));
    }
    let mean = y_true.sum() / y_true.len() as f64;
    let ss_tot: f64 = y_true.iter().map(|v| (v - mean) * (v - mean)).sum();
    let ss_res: f64 = y_true
        .iter()
        .zip(y_pred.iter())
        .map(|(t, p)| (t - p) * (t - p))
        .sum();
    if ss_tot == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - ss_res / ss_tot)
}
