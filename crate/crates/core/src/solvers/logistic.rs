//! L1-regularized logistic regression via proximal gradient descent
//! (ISTA) with backtracking line search.
//!
//! Objective: mean logistic loss + (1/c_inv_reg)·‖β‖₁, intercept unpenalized.
//! Larger `c_inv_reg` means weaker regularization. Optimization starts from
//! zero weights and is fully deterministic.

use ndarray::{Array1, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub c_inv_reg: f64,
    pub converged: bool,
}

const PROBA_EPS: f64 = 1e-12;

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticModel {
    /// Probability of the positive class, clamped to (0, 1).
    pub fn predict_proba(&self, x: ArrayView2<f64>) -> Array1<f64> {
        let w = Array1::from(self.weights.clone());
        let z = x.dot(&w) + self.intercept;
        z.mapv(|v| sigmoid(v).clamp(PROBA_EPS, 1.0 - PROBA_EPS))
    }

    pub fn predict_proba_row(&self, row: &[f64]) -> f64 {
        let z: f64 = self
            .weights
            .iter()
            .zip(row.iter())
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + self.intercept;
        sigmoid(z).clamp(PROBA_EPS, 1.0 - PROBA_EPS)
    }
}

/// Mean logistic loss (the smooth part of the objective).
fn smooth_loss(x: ArrayView2<f64>, y_sign: &Array1<f64>, beta: &Array1<f64>, b: f64) -> f64 {
    let z = x.dot(beta) + b;
    let n = x.nrows() as f64;
    z.iter()
        .zip(y_sign.iter())
        .map(|(zi, yi)| {
            let m = -yi * zi;
            // log(1 + exp(m)) computed stably
            if m > 30.0 {
                m
            } else {
                m.exp().ln_1p()
            }
        })
        .sum::<f64>()
        / n
}

/// Gradient of the smooth part w.r.t. (beta, intercept).
fn smooth_grad(
    x: ArrayView2<f64>,
    y_sign: &Array1<f64>,
    beta: &Array1<f64>,
    b: f64,
) -> (Array1<f64>, f64) {
    let n = x.nrows() as f64;
    let z = x.dot(beta) + b;
    // d/dz log(1+exp(-y z)) = -y·sigmoid(-y z)
    let g: Array1<f64> = z
        .iter()
        .zip(y_sign.iter())
        .map(|(zi, yi)| -yi * sigmoid(-yi * zi))
        .collect();
    let grad_beta = x.t().dot(&g) / n;
    let grad_b = g.sum() / n;
    (grad_beta, grad_b)
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

/// Fit by ISTA with backtracking. `y` holds 0/1 class labels.
pub fn logistic_l1_fit(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    c_inv_reg: f64,
    tol: f64,
    max_iter: usize,
) -> Result<LogisticModel> {
    let n = x.nrows();
    let p = x.ncols();
    if n != y.len() || n < 2 {
        return Err(Error::Invalid(format!(
            "logistic_l1_fit: need rows(X) = len(y) >= 2, got {} and {}",
            n,
            y.len()
        )));
    }
    if c_inv_reg <= 0.0 {
        return Err(Error::Invalid(format!(
            "logistic_l1_fit: c_inv_reg must be > 0, got {}",
            c_inv_reg
        )));
    }
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::Invalid(
            "logistic_l1_fit: labels must be 0 or 1".into(),
        ));
    }
    let n_pos = y.iter().filter(|&&v| v == 1.0).count();
    if n_pos == 0 || n_pos == n {
        return Err(Error::Invalid(
            "logistic_l1_fit: both classes must be present".into(),
        ));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("logistic_l1_fit: non-finite input".into()));
    }

    let y_sign: Array1<f64> = y.mapv(|v| if v == 1.0 { 1.0 } else { -1.0 });
    let lambda = 1.0 / c_inv_reg;

    let mut beta = Array1::<f64>::zeros(p);
    let mut b = 0.0f64;
    let mut step = 1.0f64;
    let mut converged = false;

    for _iter in 0..max_iter {
        let f0 = smooth_loss(x, &y_sign, &beta, b);
        let (gb, gi) = smooth_grad(x, &y_sign, &beta, b);

        // backtracking on the smooth part's quadratic upper bound
        let (new_beta, new_b) = loop {
            let cand_beta: Array1<f64> = beta
                .iter()
                .zip(gb.iter())
                .map(|(bj, gj)| soft_threshold(bj - step * gj, step * lambda))
                .collect();
            let cand_b = b - step * gi;
            let f1 = smooth_loss(x, &y_sign, &cand_beta, cand_b);
            let diff_beta = &cand_beta - &beta;
            let diff_b = cand_b - b;
            let lin = gb.dot(&diff_beta) + gi * diff_b;
            let quad = (diff_beta.dot(&diff_beta) + diff_b * diff_b) / (2.0 * step);
            if f1 <= f0 + lin + quad + 1e-15 {
                break (cand_beta, cand_b);
            }
            step *= 0.5;
            if step < 1e-18 {
                break (cand_beta, cand_b);
            }
        };

        let max_delta = new_beta
            .iter()
            .zip(beta.iter())
            .map(|(a, c)| (a - c).abs())
            .fold((new_b - b).abs(), f64::max);
        beta = new_beta;
        b = new_b;
        // allow the step to grow back so one conservative iteration does not
        // pin the rest of the run
        step = (step * 1.5).min(1e6);

        if max_delta < tol {
            converged = true;
            break;
        }
    }

    Ok(LogisticModel {
        weights: beta.to_vec(),
        intercept: b,
        c_inv_reg,
        converged,
    })
}

/// Max violation of the L1 subgradient optimality conditions at `model`.
/// Zero coordinates require |∂loss/∂βⱼ| ≤ λ; active ones require
/// ∂loss/∂βⱼ + λ·sign(βⱼ) = 0; the intercept requires a vanishing gradient.
pub fn logistic_l1_kkt_violation(
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    model: &LogisticModel,
) -> f64 {
    let y_sign: Array1<f64> = y.mapv(|v| if v == 1.0 { 1.0 } else { -1.0 });
    let beta = Array1::from(model.weights.clone());
    let (gb, gi) = smooth_grad(x, &y_sign, &beta, model.intercept);
    let lambda = 1.0 / model.c_inv_reg;
    let mut worst = gi.abs();
    for (j, &bj) in model.weights.iter().enumerate() {
        let v = if bj == 0.0 {
            (gb[j].abs() - lambda).max(0.0)
        } else {
            (gb[j] + lambda * bj.signum()).abs()
        };
        worst = worst.max(v);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn separable_1d_reaches_full_training_accuracy() {
        let x = array![[-1.0], [1.0], [-0.8], [1.2]];
        let y = array![0.0, 1.0, 0.0, 1.0];
        let m = logistic_l1_fit(x.view(), y.view(), 1e4, 1e-8, 50_000).unwrap();
        let p = m.predict_proba(x.view());
        for (pi, yi) in p.iter().zip(y.iter()) {
            assert_eq!((*pi > 0.5) as i32 as f64, *yi);
        }
    }

    #[test]
    fn extreme_regularization_collapses_to_prior() {
        let x = array![[-1.0], [1.0], [-0.5], [0.7], [0.1], [-0.2]];
        let y = array![0.0, 1.0, 0.0, 1.0, 1.0, 1.0]; // prior 4/6
        let m = logistic_l1_fit(x.view(), y.view(), 1e-6, 1e-10, 50_000).unwrap();
        assert!(m.weights.iter().all(|&w| w == 0.0));
        let p = m.predict_proba_row(&[0.0]);
        assert_abs_diff_eq!(p, 4.0 / 6.0, epsilon = 1e-4);
    }

    #[test]
    fn single_class_rejected() {
        let x = array![[1.0], [2.0]];
        let y = array![1.0, 1.0];
        assert!(logistic_l1_fit(x.view(), y.view(), 1.0, 1e-6, 100).is_err());
    }

    #[test]
    fn noise_column_gets_less_weight_than_signal() {
        // one informative and one pure-noise column; oracle for the moderate
        // penalty case is a fine grid search over the 2-D weight space
        let x = array![
            [-1.2, 0.3],
            [-0.9, -0.8],
            [-1.1, 0.9],
            [-0.7, -0.2],
            [-1.4, 0.5],
            [1.0, -0.6],
            [0.8, 0.7],
            [1.3, 0.1],
            [0.9, -0.9],
            [1.2, 0.4]
        ];
        let y = array![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let m = logistic_l1_fit(x.view(), y.view(), 10.0, 1e-10, 100_000).unwrap();
        assert!(m.weights[0].abs() > m.weights[1].abs());

        let m_strong = logistic_l1_fit(x.view(), y.view(), 2.0, 1e-10, 100_000).unwrap();
        assert_eq!(m_strong.weights[1], 0.0);
        assert!(m_strong.weights[0].abs() > 0.0);

        // grid-search oracle over (w0, w1) at the strong penalty, intercept
        // refined by ternary search for each grid point
        let y_sign: Array1<f64> = y.mapv(|v| if v == 1.0 { 1.0 } else { -1.0 });
        let lambda = 1.0 / 2.0;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let mut w0 = -3.0;
        while w0 <= 3.0 {
            let mut w1 = -3.0;
            while w1 <= 3.0 {
                let beta = array![w0, w1];
                let mut lo = -3.0;
                let mut hi = 3.0;
                for _ in 0..60 {
                    let m1 = lo + (hi - lo) / 3.0;
                    let m2 = hi - (hi - lo) / 3.0;
                    if smooth_loss(x.view(), &y_sign, &beta, m1)
                        < smooth_loss(x.view(), &y_sign, &beta, m2)
                    {
                        hi = m2;
                    } else {
                        lo = m1;
                    }
                }
                let b = (lo + hi) / 2.0;
                let obj =
                    smooth_loss(x.view(), &y_sign, &beta, b) + lambda * (w0.abs() + w1.abs());
                if obj < best.0 {
                    best = (obj, w0, w1);
                }
                w1 += 0.01;
            }
            w0 += 0.01;
        }
        assert_abs_diff_eq!(m_strong.weights[0], best.1, epsilon = 0.02);
        assert_abs_diff_eq!(m_strong.weights[1], best.2, epsilon = 0.02);
    }

    #[test]
    fn kkt_conditions_hold_at_solution() {
        let x = array![
            [0.5, -1.0, 0.2],
            [1.5, 0.3, -0.4],
            [-0.5, 0.8, 1.0],
            [-1.5, -0.2, -0.8],
            [0.7, 1.2, 0.1],
            [-0.7, -1.1, 0.6]
        ];
        let y = array![1.0, 1.0, 0.0, 0.0, 1.0, 0.0];
        let tol = 1e-9;
        let m = logistic_l1_fit(x.view(), y.view(), 5.0, tol, 200_000).unwrap();
        assert!(m.converged);
        let viol = logistic_l1_kkt_violation(x.view(), y.view(), &m);
        assert!(viol <= tol * 10.0, "kkt violation {}", viol);
    }

    #[test]
    fn smooth_gradient_matches_central_differences() {
        let x = array![
            [0.4, -0.9],
            [1.1, 0.2],
            [-0.3, 0.7],
            [-1.2, -0.5],
            [0.6, 1.0]
        ];
        let y = array![1.0, 1.0, 0.0, 0.0, 1.0];
        let y_sign: Array1<f64> = y.mapv(|v: f64| if v == 1.0 { 1.0 } else { -1.0 });
        let beta = array![0.3, -0.7];
        let b = 0.15;
        let (gb, gi) = smooth_grad(x.view(), &y_sign, &beta, b);
        let h = 1e-6;
        for j in 0..2 {
            let mut plus = beta.clone();
            let mut minus = beta.clone();
            plus[j] += h;
            minus[j] -= h;
            let fd = (smooth_loss(x.view(), &y_sign, &plus, b)
                - smooth_loss(x.view(), &y_sign, &minus, b))
                / (2.0 * h);
            assert!((fd - gb[j]).abs() / fd.abs().max(1e-12) < 1e-5);
        }
        let fd_b = (smooth_loss(x.view(), &y_sign, &beta, b + h)
            - smooth_loss(x.view(), &y_sign, &beta, b - h))
            / (2.0 * h);
        assert!((fd_b - gi).abs() / fd_b.abs().max(1e-12) < 1e-5);
    }
}
