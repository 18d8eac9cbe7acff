//! Declarative run configuration. Runs involve well over a dozen knobs, so
//! everything lives in one TOML file; the few global CLI flags override
//! their config counterparts. The effective (post-override) config is
//! re-serialized canonically and hashed, and that hash is embedded in every
//! output file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lexbridge::eval::SynthConfig;
use lexbridge::solvers::{ElasticNetPoint, LogisticPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Rrr,
    Jfs,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Plain => write!(f, "plain"),
            Mode::Rrr => write!(f, "rrr"),
            Mode::Jfs => write!(f, "jfs"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct IoSection {
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct DataSection {
    // extract, narration mode
    pub narrations: Option<PathBuf>,
    pub lang: Option<String>,
    pub lexicon: Option<PathBuf>,
    // extract, parallel mode
    pub parallel: Option<PathBuf>,
    pub lexicon_src: Option<PathBuf>,
    pub lexicon_tgt: Option<PathBuf>,
    // train / ablate, feature-matrix mode
    pub parallel_src: Option<PathBuf>,
    pub parallel_tgt: Option<PathBuf>,
    pub db_features: Option<PathBuf>,
    pub db_labels: Option<PathBuf>,
    pub vocab_src: Option<PathBuf>,
    pub vocab_tgt: Option<PathBuf>,
    // evaluation inputs
    pub pipeline: Option<PathBuf>,
    pub eval_src: Option<PathBuf>,
    pub eval_narrations: Option<PathBuf>,
    pub eval_lexicon: Option<PathBuf>,
    pub severities: Option<PathBuf>,
    pub task_scores: Option<PathBuf>,
    pub translated: Option<PathBuf>,
    pub translated_lexicon: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub n_samples: usize,
    pub min_lines: usize,
    pub max_lines: usize,
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            n_samples: 50_000,
            min_lines: 1,
            max_lines: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExtractSection {
    /// 0 = per-language default (100 ratio-mode for en, 60 count-mode for zh)
    pub cfg_top_k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub mode: Mode,
    pub seed: u64,
    /// 0 = choose K automatically (jfs mode only)
    pub k: usize,
    pub k_folds_correspondence: usize,
    pub k_folds_classifier: usize,
    pub alpha_grid: Vec<f64>,
    pub l1_ratio_grid: Vec<f64>,
    pub c_inv_grid: Vec<f64>,
    pub rank_grid: Vec<usize>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        TrainSection {
            mode: Mode::Jfs,
            seed: 42,
            k: 0,
            k_folds_correspondence: 3,
            k_folds_classifier: 5,
            alpha_grid: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0],
            l1_ratio_grid: vec![0.1, 0.5, 0.9, 1.0],
            c_inv_grid: vec![0.01, 0.1, 1.0, 10.0],
            rank_grid: vec![1, 2, 4, 8, 16],
            tol: 1e-6,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AblateSection {
    pub sizes: Vec<usize>,
    pub reps: usize,
}

impl Default for AblateSection {
    fn default() -> Self {
        AblateSection {
            sizes: vec![10, 100, 1000, 2000],
            reps: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSection {
    pub n_parallel: usize,
    pub src_dim: usize,
    pub tgt_dim: usize,
    pub true_rank: usize,
    pub noise_sigma: f64,
    pub noise_fraction: f64,
    pub n_eval: usize,
    pub n_labeled: usize,
}

impl Default for SynthSection {
    fn default() -> Self {
        let d = SynthConfig::default();
        SynthSection {
            n_parallel: d.n_parallel,
            src_dim: d.src_dim,
            tgt_dim: d.tgt_dim,
            true_rank: d.true_rank,
            noise_sigma: d.noise_sigma,
            noise_fraction: d.noise_fraction,
            n_eval: d.n_eval,
            n_labeled: d.n_labeled,
        }
    }
}

impl SynthSection {
    pub fn to_config(&self) -> SynthConfig {
        SynthConfig {
            n_parallel: self.n_parallel,
            src_dim: self.src_dim,
            tgt_dim: self.tgt_dim,
            true_rank: self.true_rank,
            noise_sigma: self.noise_sigma,
            noise_fraction: self.noise_fraction,
            n_eval: self.n_eval,
            n_labeled: self.n_labeled,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub io: IoSection,
    pub data: DataSection,
    pub sampling: SamplingSection,
    pub extract: ExtractSection,
    pub train: TrainSection,
    pub ablate: AblateSection,
    pub synth: SynthSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let content = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {}", path.display(), e))?;
        let config: RunConfig = toml::from_str(&content)
            .map_err(|e| anyhow::anyhow!("config {}: {}", path.display(), e))?;
        Ok(config)
    }

    /// Hash of the effective config (canonical TOML serialization).
    pub fn sha256(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn elasticnet_grid(&self) -> Vec<ElasticNetPoint> {
        let mut grid = Vec::new();
        for &alpha in &self.train.alpha_grid {
            for &l1_ratio in &self.train.l1_ratio_grid {
                grid.push(ElasticNetPoint { alpha, l1_ratio });
            }
        }
        grid
    }

    pub fn logistic_grid(&self) -> Vec<LogisticPoint> {
        self.train
            .c_inv_grid
            .iter()
            .map(|&c_inv_reg| LogisticPoint { c_inv_reg })
            .collect()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.io
            .out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_and_hash_is_stable() {
        let c = RunConfig::default();
        let s = toml::to_string(&c).unwrap();
        let back: RunConfig = toml::from_str(&s).unwrap();
        assert_eq!(c.sha256(), back.sha256());
        assert_eq!(c.sampling.n_samples, 50_000);
        assert_eq!(c.sampling.min_lines, 1);
        assert_eq!(c.sampling.max_lines, 50);
        assert_eq!(c.train.k_folds_correspondence, 3);
        assert_eq!(c.train.k_folds_classifier, 5);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: Result<RunConfig, _> = toml::from_str("[train]\nnonsense = 1\n");
        assert!(r.is_err());
    }

    #[test]
    fn hash_changes_with_content() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        b.train.seed = 43;
        assert_ne!(a.sha256(), b.sha256());
    }
}
