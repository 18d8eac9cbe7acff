//! First principal component of a score matrix, used to collapse several
//! task scores into one scalar per row.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::solvers::linalg::symmetric_eigen;

/// Projections of rows onto the first principal component.
#[derive(Debug, Clone)]
pub struct PcaScores {
    pub scores: Vec<f64>,
    /// column indices dropped for having zero variance
    pub dropped_columns: Vec<usize>,
}

/// Columns are z-scored internally, so the component is an eigenvector of
/// the correlation matrix. The sign is oriented so the component correlates
/// non-negatively with the row-wise mean of the standardized scores.
pub fn pca_first_component(s: ArrayView2<f64>) -> Result<PcaScores> {
    let n = s.nrows();
    if n < 2 {
        return Err(Error::Invalid(format!(
            "pca_first_component needs at least 2 rows, got {}",
            n
        )));
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("pca_first_component: non-finite input".into()));
    }

    // z-score, dropping degenerate columns
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut cols: Vec<Array1<f64>> = Vec::new();
    for (j, col) in s.columns().into_iter().enumerate() {
        let mean = col.sum() / n as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        if std > 1e-12 * mean.abs().max(1.0) {
            kept.push(j);
            cols.push(col.mapv(|v| (v - mean) / std));
        } else {
            dropped.push(j);
        }
    }
    if kept.is_empty() {
        return Err(Error::Numeric(
            "pca_first_component: all columns have zero variance".into(),
        ));
    }

    let k = kept.len();
    let mut z = Array2::<f64>::zeros((n, k));
    for (jj, col) in cols.iter().enumerate() {
        z.column_mut(jj).assign(col);
    }

    let scores = if k == 1 {
        z.column(0).to_owned()
    } else {
        let corr = z.t().dot(&z) / n as f64;
        let (_vals, vecs) = symmetric_eigen(corr.view())?;
        let v1 = vecs.column(0).to_owned();
        z.dot(&v1)
    };

    // orient: non-negative covariance with the row-mean of standardized scores
    let row_mean = z.mean_axis(Axis(1)).unwrap();
    let cov: f64 = scores
        .iter()
        .zip(row_mean.iter())
        .map(|(a, b)| a * b)
        .sum();
    let oriented = if cov < 0.0 { scores.mapv(|v| -v) } else { scores };

    Ok(PcaScores {
        scores: oriented.to_vec(),
        dropped_columns: dropped,
    })
}
