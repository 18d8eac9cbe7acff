//! lexbridge learns a linear correspondence between independently engineered
//! lexicosyntactic feature spaces in two languages from a parallel corpus,
//! and composes it with an English dementia classifier to score
//! Mandarin-language narrations.
//!
//! Modules follow the pipeline:
//!
//! - [`corpus`]: load narrations, parallel corpora, lexicons, task scores;
//!   sample dialogue windows
//! - [`featx`]: parse trees and compute the per-language feature inventories
//! - [`solvers`]: ElasticNet, L1 logistic regression, reduced rank
//!   regression, PCA, cross-validated grid search
//! - [`bridge`]: the correspondence model, joint feature selection, and the
//!   composed end-to-end scorer
//! - [`eval`]: ground-truth derivation, Spearman metrics, baselines,
//!   ablation, and the synthetic benchmark generator

pub mod bridge;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod featx;
pub mod solvers;

pub use bridge::{
    joint_feature_select, load_pipeline, map_features, predict_dementia, save_pipeline, sweep_k,
    train_correspondence, train_correspondence_rrr, CorrespondenceMode, CorrespondenceModel,
    KSweepCurve, PipelineModel, PipelineParts,
};
pub use corpus::{
    load_lexicon, load_narrations, load_parallel, load_task_scores, sample_windows,
    FrequencyLexicon, Label, LabeledNarration, Narration, ParallelPair, Sentence, TaskScoreTable,
};
pub use error::{Error, Result};
pub use eval::{
    ablate_sample_size, derive_dementia_scores, evaluate_pipeline, evaluate_pipeline_matrix,
    generate_synthetic_benchmark, spearman_rho, translate_baseline, unilingual_baseline,
    AblationParams, AblationResult, DementiaScores, SynthConfig, SyntheticBenchmark,
};
pub use featx::{
    build_cfg_vocab, extract, extract_english, extract_mandarin, parse_bracketed, prune_constant,
    CfgMode, CfgVocabulary, FeatureMatrix, FeatureVector, ParseTree, PruneMask,
};
pub use solvers::{
    cv_elasticnet, cv_grid_search, cv_logistic, elasticnet_fit, kfold_indices, logistic_l1_fit,
    pca_first_component, r2_score, rrr_fit, CvMetric, CvReport, ElasticNetPoint, LinearMap,
    LinearModel, LogisticModel, LogisticPoint, Standardizer,
};
