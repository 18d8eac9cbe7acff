//! Lexicosyntactic feature extraction: bracketed-tree parsing, the English
//! and Mandarin feature inventories, CFG vocabularies, and near-constant
//! pruning.

pub mod complexity;
pub mod extract;
pub mod matrix;
pub mod pos;
pub mod prune;
pub mod registry;
pub mod richness;
pub mod tagset;
pub mod tree;
pub mod vocab;

pub use complexity::{phrase_stats, syntactic_complexity};
pub use extract::{extract, extract_english, extract_mandarin};
pub use matrix::{FeatureMatrix, FeatureVector};
pub use pos::pos_counts;
pub use prune::{prune_constant, PruneMask};
pub use registry::{registry_en, registry_zh, FeatureRegistry};
pub use richness::lexical_richness;
pub use tagset::{tagset_en, tagset_for, tagset_zh, TagsetTable};
pub use tree::{count_productions, parse_bracketed, production_string, tree_stats, ParseTree};
pub use vocab::{build_cfg_vocab, CfgMode, CfgVocabulary};
