//! Synthetic benchmark generator. Real clinical corpora are gated, so the
//! evaluation protocol runs on planted ground truth: a low-rank linear map
//! ties source features to the clean target features, severities and labels
//! derive from the clean targets, and the remaining targets are pure noise
//! in the parallel corpus (while still separating the classes in the labeled
//! set, which is exactly the trap joint feature selection exists to avoid).

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featx::matrix::FeatureMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_parallel: usize,
    pub src_dim: usize,
    pub tgt_dim: usize,
    pub true_rank: usize,
    pub noise_sigma: f64,
    /// fraction of target features that are pure noise in the parallel corpus
    pub noise_fraction: f64,
    pub n_eval: usize,
    pub n_labeled: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_parallel: 2000,
            src_dim: 40,
            tgt_dim: 30,
            true_rank: 10,
            noise_sigma: 0.1,
            noise_fraction: 0.5,
            n_eval: 49,
            n_labeled: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticBenchmark {
    pub parallel_src: FeatureMatrix,
    pub parallel_tgt: FeatureMatrix,
    /// labeled set in the target feature space (the classifier's input)
    pub db: FeatureMatrix,
    pub db_labels: Vec<bool>,
    pub eval_src: FeatureMatrix,
    /// planted severity per eval row, aligned with `eval_src.ids`
    pub severities: Vec<f64>,
    /// ground truth: names of targets that are linear in the source
    pub clean_targets: Vec<String>,
    pub config: SynthConfig,
    pub seed: u64,
}

fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| {
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    })
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:03}")).collect()
}

fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:05}")).collect()
}

pub fn generate_synthetic_benchmark(config: &SynthConfig, seed: u64) -> Result<SyntheticBenchmark> {
    let c = config;
    if c.n_parallel < 2 || c.src_dim == 0 || c.tgt_dim == 0 || c.true_rank == 0 {
        return Err(Error::Invalid(format!(
            "synthetic config: n_parallel >= 2 and positive dims/rank required, got {:?}",
            c
        )));
    }
    if !(0.0..=1.0).contains(&c.noise_fraction) || c.noise_sigma < 0.0 {
        return Err(Error::Invalid(
            "synthetic config: noise_fraction in [0,1] and noise_sigma >= 0 required".into(),
        ));
    }
    if c.n_eval < 2 || c.n_labeled < 10 {
        return Err(Error::Invalid(
            "synthetic config: n_eval >= 2 and n_labeled >= 10 required".into(),
        ));
    }
    let n_clean = ((c.tgt_dim as f64) * (1.0 - c.noise_fraction)).round() as usize;
    if n_clean == 0 {
        return Err(Error::Invalid(
            "synthetic config: at least one clean target required (lower noise_fraction)".into(),
        ));
    }
    let n_noise = c.tgt_dim - n_clean;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // which target columns are clean
    let mut perm: Vec<usize> = (0..c.tgt_dim).collect();
    for i in (1..perm.len()).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut clean_idx: Vec<usize> = perm[..n_clean].to_vec();
    clean_idx.sort_unstable();
    let noise_idx: Vec<usize> = (0..c.tgt_dim).filter(|i| !clean_idx.contains(i)).collect();

    // rank-bounded map with unit-variance clean targets
    let a = randn(&mut rng, c.src_dim, c.true_rank);
    let b = randn(&mut rng, c.true_rank, n_clean);
    let mut w = a.dot(&b);
    for mut col in w.columns_mut() {
        let norm = col.dot(&col).sqrt();
        if norm > 0.0 {
            col.mapv_inplace(|v| v / norm);
        }
    }

    // severity/label direction over clean targets
    let mut beta = randn(&mut rng, n_clean, 1).column(0).to_owned();
    let bn = beta.dot(&beta).sqrt();
    beta.mapv_inplace(|v| v / bn);

    // per-noise-column class separation in the labeled set
    let deltas: Vec<f64> = (0..n_noise).map(|_| rng.gen_range(0.8..1.6)).collect();

    let tgt_names = names("t", c.tgt_dim);
    let src_names = names("s", c.src_dim);

    let fill_targets = |clean: &Array2<f64>, noise: &Array2<f64>| -> Array2<f64> {
        let rows = clean.nrows();
        let mut out = Array2::<f64>::zeros((rows, c.tgt_dim));
        for (k, &j) in clean_idx.iter().enumerate() {
            out.column_mut(j).assign(&clean.column(k));
        }
        for (k, &j) in noise_idx.iter().enumerate() {
            out.column_mut(j).assign(&noise.column(k));
        }
        out
    };

    // parallel corpus
    let x_par = randn(&mut rng, c.n_parallel, c.src_dim);
    let clean_par = x_par.dot(&w) + &(randn(&mut rng, c.n_parallel, n_clean) * c.noise_sigma);
    let noise_par = randn(&mut rng, c.n_parallel, n_noise);
    let y_par = fill_targets(&clean_par, &noise_par);

    // labeled (classifier-side) set
    let z_db = randn(&mut rng, c.n_labeled, c.src_dim);
    let clean_db = z_db.dot(&w) + &(randn(&mut rng, c.n_labeled, n_clean) * c.noise_sigma);
    let s_db: Array1<f64> = clean_db.dot(&beta);
    let labels: Vec<bool> = s_db.iter().map(|&v| v > 0.0).collect();
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(Error::Numeric(
            "synthetic labeled set degenerated to a single class; change the seed".into(),
        ));
    }
    let mut noise_db = randn(&mut rng, c.n_labeled, n_noise);
    for (i, &lab) in labels.iter().enumerate() {
        let sign = if lab { 1.0 } else { -1.0 };
        for (k, &d) in deltas.iter().enumerate() {
            noise_db[[i, k]] += sign * d;
        }
    }
    let y_db = fill_targets(&clean_db, &noise_db);

    // evaluation set with planted severities
    let x_eval = randn(&mut rng, c.n_eval, c.src_dim);
    let clean_eval = x_eval.dot(&w) + &(randn(&mut rng, c.n_eval, n_clean) * c.noise_sigma);
    let severities: Vec<f64> = clean_eval.dot(&beta).to_vec();

    Ok(SyntheticBenchmark {
        parallel_src: FeatureMatrix {
            ids: ids("par", c.n_parallel),
            names: src_names.clone(),
            data: x_par,
        },
        parallel_tgt: FeatureMatrix {
            ids: ids("par", c.n_parallel),
            names: tgt_names.clone(),
            data: y_par,
        },
        db: FeatureMatrix {
            ids: ids("db", c.n_labeled),
            names: tgt_names.clone(),
            data: y_db,
        },
        db_labels: labels,
        eval_src: FeatureMatrix {
            ids: ids("ev", c.n_eval),
            names: src_names,
            data: x_eval,
        },
        severities,
        clean_targets: clean_idx.iter().map(|&j| tgt_names[j].clone()).collect(),
        config: c.clone(),
        seed,
    })
}
