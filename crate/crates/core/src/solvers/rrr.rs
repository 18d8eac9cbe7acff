//! Reduced rank regression: least squares for all targets at once, with the
//! coefficient matrix constrained to rank ≤ R by projecting fitted values
//! onto their top principal subspace.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::linalg::{ridge_solve, symmetric_eigen};

/// Conditioning ridge added to XᵀX before the least-squares step. This is a
/// deliberate deviation from the textbook OLS step so rank-deficient inputs
/// stay solvable.
pub const RRR_RIDGE: f64 = 1e-8;

/// A rank-constrained multivariate linear map y ≈ xᵀ·matrix + intercepts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearMap {
    /// source-dim × target-dim coefficient matrix
    pub matrix: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
    pub rank_bound: usize,
    /// set when the requested rank exceeded min(dims) and was clamped
    pub clamped: bool,
}

impl LinearMap {
    pub fn coefficient_array(&self) -> Array2<f64> {
        let p = self.matrix.len();
        let q = self.intercepts.len();
        let mut b = Array2::<f64>::zeros((p, q));
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                b[[i, j]] = *v;
            }
        }
        b
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let b = self.coefficient_array();
        let mut out = x.dot(&b);
        let intercepts = Array1::from(self.intercepts.clone());
        for mut row in out.rows_mut() {
            row += &intercepts;
        }
        out
    }
}

/// Fit the rank-bounded map. `y` is expected to be standardized by the
/// caller; the fit itself only centers.
pub fn rrr_fit(x: ArrayView2<f64>, y: ArrayView2<f64>, rank_bound: usize) -> Result<LinearMap> {
    let n = x.nrows();
    let p = x.ncols();
    let q = y.ncols();
    if y.nrows() != n || n < 2 {
        return Err(Error::Invalid(format!(
            "rrr_fit: need rows(X) = rows(Y) >= 2, got {} and {}",
            n,
            y.nrows()
        )));
    }
    if rank_bound == 0 {
        return Err(Error::Invalid("rrr_fit: rank_bound must be >= 1".into()));
    }
    if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("rrr_fit: non-finite input".into()));
    }
    let max_rank = p.min(q);
    let clamped = rank_bound > max_rank;
    let rank = rank_bound.min(max_rank);

    let x_mean = x.mean_axis(Axis(0)).unwrap();
    let y_mean = y.mean_axis(Axis(0)).unwrap();
    let xc = &x.to_owned() - &x_mean;
    let yc = &y.to_owned() - &y_mean;

    let gram = xc.t().dot(&xc);
    let xty = xc.t().dot(&yc);
    let b_ols = ridge_solve(gram.view(), xty.view(), RRR_RIDGE)?;

    let b = if rank >= q {
        b_ols
    } else {
        // project fitted values onto their top-`rank` right singular subspace
        let fitted = xc.dot(&b_ols);
        let m = fitted.t().dot(&fitted);
        let (_vals, vecs) = symmetric_eigen(m.view())?;
        let vr = vecs.slice(ndarray::s![.., ..rank]).to_owned();
        b_ols.dot(&vr).dot(&vr.t())
    };

    let intercepts = &y_mean - &x_mean.dot(&b);
    Ok(LinearMap {
        matrix: b.rows().into_iter().map(|r| r.to_vec()).collect(),
        intercepts: intercepts.to_vec(),
        rank_bound: rank,
        clamped,
    })
}
