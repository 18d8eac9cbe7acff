//! Sample-size ablation: repeatedly retrain the whole correspondence + joint
//! feature selection pipeline on resampled parallel rows and record the
//! end-to-end Spearman ρ per (size, repetition).

use ndarray::ArrayView1;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bridge::{sweep_k_with_folds, train_correspondence, PipelineParts};
use crate::error::{Error, Result};
use crate::featx::matrix::FeatureMatrix;
use crate::featx::prune::PruneMask;
use crate::solvers::{ElasticNetPoint, LogisticPoint};

/// Shared hyperparameters for one end-to-end training run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndToEndConfig {
    pub en_grid: Vec<ElasticNetPoint>,
    pub c_grid: Vec<LogisticPoint>,
    pub k_folds_correspondence: usize,
    pub k_folds_classifier: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EndToEndConfig {
    fn default() -> Self {
        EndToEndConfig {
            en_grid: crate::solvers::default_elasticnet_grid(),
            c_grid: crate::solvers::default_logistic_grid(),
            k_folds_correspondence: 3,
            k_folds_classifier: 5,
            tol: 1e-5,
            max_iter: 1000,
        }
    }
}

/// Matrix-mode inputs for ablation and end-to-end runs.
#[derive(Debug, Clone, Copy)]
pub struct AblationInputs<'a> {
    pub x_src: &'a FeatureMatrix,
    pub y_tgt: &'a FeatureMatrix,
    pub db_x: &'a FeatureMatrix,
    pub db_y: ArrayView1<'a, f64>,
    pub eval_x: &'a FeatureMatrix,
    pub severities: &'a [f64],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AblationParams {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub base_seed: u64,
    pub run: EndToEndConfig,
}

impl AblationParams {
    pub fn new(sizes: Vec<usize>, base_seed: u64) -> Self {
        AblationParams {
            sizes,
            reps: 10,
            base_seed,
            run: EndToEndConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub size: usize,
    pub rep: usize,
    pub seed: u64,
    pub spearman: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationSummary {
    pub size: usize,
    pub mean: f64,
    /// sample standard deviation over repetitions
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationResult {
    pub rows: Vec<AblationRow>,
    pub summary: Vec<AblationSummary>,
}

impl AblationResult {
    pub fn detail_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("size,rep,seed,spearman\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.size, r.rep, r.seed, r.spearman));
        }
        out
    }

    pub fn summary_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("size,mean,two_std\n");
        for s in &self.summary {
            out.push_str(&format!("{},{},{}\n", s.size, s.mean, 2.0 * s.std));
        }
        out
    }
}

/// splitmix64-style mixing of (base, size, rep) into one stream seed.
pub fn mix_seed(base: u64, size: usize, rep: usize) -> u64 {
    let mut z = base
        ^ (size as u64).wrapping_mul(0x9E3779B97F4A7C15)
        ^ (rep as u64).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn resample_rows(m: &FeatureMatrix, indices: &[usize]) -> FeatureMatrix {
    FeatureMatrix {
        ids: indices.iter().map(|&i| m.ids[i].clone()).collect(),
        names: m.names.clone(),
        data: m.data.select(ndarray::Axis(0), indices),
    }
}

/// Train correspondence + joint feature selection on the given parallel
/// rows, sweep K, and return the best end-to-end ρ. A fully degenerate
/// sweep (every K produced constant probabilities) scores 0.
#[allow(clippy::too_many_arguments)]
pub fn run_end_to_end(
    x_src: &FeatureMatrix,
    y_tgt: &FeatureMatrix,
    db_x: &FeatureMatrix,
    db_y: ArrayView1<f64>,
    eval_x: &FeatureMatrix,
    severities: &[f64],
    seed: u64,
    run: &EndToEndConfig,
) -> Result<f64> {
    let corr = train_correspondence(
        x_src,
        y_tgt,
        &run.en_grid,
        run.k_folds_correspondence,
        seed,
        run.tol,
        run.max_iter,
    )?;
    let parts = PipelineParts {
        source_prune: PruneMask::identity(&x_src.names),
        target_prune: PruneMask::identity(&y_tgt.names),
        cfg_vocab_src: None,
        cfg_vocab_tgt: None,
    };
    let curve = sweep_k_with_folds(
        &parts,
        &corr,
        db_x,
        db_y,
        Some((eval_x, severities)),
        seed,
        &run.c_grid,
        run.k_folds_classifier,
    )?;
    Ok(curve.best_k_by_spearman().map(|(_, rho)| rho).unwrap_or(0.0))
}

/// For each (size, rep): resample `size` parallel rows with replacement
/// using a seed mixed from `base_seed`, retrain end-to-end, and record ρ.
pub fn ablate_sample_size(
    inputs: &AblationInputs,
    params: &AblationParams,
) -> Result<AblationResult> {
    if params.sizes.is_empty() {
        return Err(Error::Invalid("ablation: no sizes".into()));
    }
    if params.reps == 0 {
        return Err(Error::Invalid("ablation: reps must be >= 1".into()));
    }
    let n = inputs.x_src.n_rows();
    if n == 0 || inputs.y_tgt.n_rows() != n {
        return Err(Error::Invalid("ablation: misaligned parallel matrices".into()));
    }

    let mut rows = Vec::with_capacity(params.sizes.len() * params.reps);
    for &size in &params.sizes {
        if size < 2 {
            return Err(Error::Invalid(format!(
                "ablation size {} too small (need >= 2)",
                size
            )));
        }
        for rep in 0..params.reps {
            let seed = mix_seed(params.base_seed, size, rep);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let indices: Vec<usize> = (0..size).map(|_| rng.gen_range(0..n)).collect();
            let xs = resample_rows(inputs.x_src, &indices);
            let ys = resample_rows(inputs.y_tgt, &indices);
            let rho = run_end_to_end(
                &xs,
                &ys,
                inputs.db_x,
                inputs.db_y,
                inputs.eval_x,
                inputs.severities,
                seed,
                &params.run,
            )?;
            rows.push(AblationRow {
                size,
                rep,
                seed,
                spearman: rho,
            });
        }
    }

    let summary = params
        .sizes
        .iter()
        .map(|&size| {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| r.size == size)
                .map(|r| r.spearman)
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let std = if vals.len() > 1 {
                (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / (vals.len() - 1) as f64)
                    .sqrt()
            } else {
                0.0
            };
            AblationSummary { size, mean, std }
        })
        .collect();

    Ok(AblationResult { rows, summary })
}
