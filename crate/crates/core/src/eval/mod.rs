//! Ground-truth derivation, rank-correlation metrics, baselines, the
//! sample-size ablation harness, and the synthetic benchmark generator.

pub mod ablation;
pub mod baselines;
pub mod scores;
pub mod spearman;
pub mod synth;

pub use ablation::{
    ablate_sample_size, mix_seed, run_end_to_end, AblationInputs, AblationParams, AblationResult,
    AblationRow, AblationSummary, EndToEndConfig,
};
pub use baselines::{
    evaluate_pipeline, evaluate_pipeline_matrix, translate_baseline, unilingual_baseline,
};
pub use scores::{derive_dementia_scores, DementiaScores, SEVERITY_ORIENTATION};
pub use spearman::{average_ranks, spearman_rho};
pub use synth::{generate_synthetic_benchmark, SynthConfig, SyntheticBenchmark};
