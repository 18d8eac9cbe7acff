//! Correspondence training, joint feature selection, and the composed
//! source-language dementia scorer.

pub mod correspondence;
pub mod pipeline;
pub mod sweep;

pub use correspondence::{
    map_features, train_correspondence, train_correspondence_rrr, CorrespondenceMode,
    CorrespondenceModel, RankSelection, TargetRegression,
};
pub use pipeline::{
    joint_feature_select, joint_feature_select_with_folds, load_pipeline, predict_dementia,
    save_pipeline, PipelineModel, PipelineParts, CLASSIFIER_K_FOLDS, PIPELINE_FORMAT_VERSION,
};
pub use sweep::{sweep_k, sweep_k_with_folds, KSweepCurve, KSweepRow};

#[cfg(test)]
mod tests;
