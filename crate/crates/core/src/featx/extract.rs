//! Whole-narration feature extraction for English and Mandarin. Each
//! extractor computes a name → value map covering its registry manifest,
//! then assembles the canonical vector plus the CFG block.
//!
//! Conventions (see the feature dictionary in the repository docs):
//! word-level features run over non-punctuation tokens; out-of-vocabulary
//! words take the lexicon's default zipf; empty category denominators give 0.

use std::collections::BTreeMap;

use crate::corpus::{FrequencyLexicon, Narration};
use crate::error::{Error, Result};
use crate::featx::complexity::{phrase_stats, syntactic_complexity};
use crate::featx::matrix::FeatureVector;
use crate::featx::pos::pos_counts;
use crate::featx::registry::{registry_en, registry_zh};
use crate::featx::richness::lexical_richness;
use crate::featx::tagset::{tagset_en, tagset_zh, TagsetTable};
use crate::featx::tree::{count_productions, tree_stats, ParseTree};
use crate::featx::vocab::{CfgMode, CfgVocabulary};

fn content_tokens<'a>(narration: &'a Narration, tagset: &TagsetTable) -> Vec<(&'a str, &'a str)> {
    narration
        .tokens()
        .into_iter()
        .filter(|(_, tag)| !tagset.is_punctuation(tag))
        .collect()
}

fn mean_or(values: &[f64], default: f64) -> f64 {
    if values.is_empty() {
        default
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn median_or(values: &mut [f64], default: f64) -> f64 {
    if values.is_empty() {
        return default;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn cfg_block(trees: &[ParseTree], vocab: &CfgVocabulary) -> Vec<f64> {
    let counts = count_productions(trees);
    let total: usize = counts.values().sum();
    vocab
        .productions
        .iter()
        .map(|p| {
            let c = counts.get(p).copied().unwrap_or(0) as f64;
            match vocab.mode {
                CfgMode::Count => c,
                CfgMode::Ratio => {
                    if total > 0 {
                        c / total as f64
                    } else {
                        0.0
                    }
                }
            }
        })
        .collect()
}

fn insert_vector(map: &mut BTreeMap<String, f64>, v: &FeatureVector) {
    for (n, val) in v.names.iter().zip(v.values.iter()) {
        map.insert(n.clone(), *val);
    }
}

/// English feature vector: narrative length, vocabulary richness, zipf
/// frequency metrics, POS block, tree statistics, phrase statistics,
/// syntactic complexity, and the CFG ratio block. 185 columns with the
/// shipped registry and a full 100-production vocabulary.
pub fn extract_english(
    narration: &Narration,
    lexicon: &FrequencyLexicon,
    vocab: &CfgVocabulary,
) -> Result<FeatureVector> {
    if narration.lang != "en" {
        return Err(Error::Narration {
            id: narration.id.clone(),
            msg: format!("extract_english on language '{}'", narration.lang),
        });
    }
    if vocab.mode != CfgMode::Ratio {
        return Err(Error::Invalid(
            "extract_english requires a ratio-mode vocabulary".into(),
        ));
    }
    let tagset = tagset_en();
    let trees = narration.parse_trees()?;
    let tokens = content_tokens(narration, tagset);
    if tokens.is_empty() {
        return Err(Error::Narration {
            id: narration.id.clone(),
            msg: "no non-punctuation tokens".into(),
        });
    }

    let mut map = BTreeMap::new();
    map.insert("word_count".into(), tokens.len() as f64);
    map.insert("sentence_count".into(), narration.sentences.len() as f64);

    let surfaces: Vec<&str> = tokens.iter().map(|(s, _)| *s).collect();
    insert_vector(&mut map, &lexical_richness(&surfaces)?);

    let char_lens: Vec<f64> = surfaces.iter().map(|s| s.chars().count() as f64).collect();
    map.insert("mean_word_length".into(), mean_or(&char_lens, 0.0));

    let zipf_all: Vec<f64> = surfaces.iter().map(|s| lexicon.lookup(s)).collect();
    map.insert("zipf_mean_all".into(), mean_or(&zipf_all, 0.0));
    let noun_tags = &tagset.categories.iter().find(|c| c.name == "noun").unwrap().tags;
    let verb_tags = &tagset.categories.iter().find(|c| c.name == "verb").unwrap().tags;
    let zipf_nouns: Vec<f64> = tokens
        .iter()
        .filter(|(_, t)| noun_tags.contains(*t))
        .map(|(s, _)| lexicon.lookup(s))
        .collect();
    let zipf_verbs: Vec<f64> = tokens
        .iter()
        .filter(|(_, t)| verb_tags.contains(*t))
        .map(|(s, _)| lexicon.lookup(s))
        .collect();
    map.insert("zipf_mean_nouns".into(), mean_or(&zipf_nouns, 0.0));
    map.insert("zipf_mean_verbs".into(), mean_or(&zipf_verbs, 0.0));

    insert_vector(&mut map, &pos_counts(narration, tagset)?);

    let (hmax, hmed, hmean) = tree_stats(&trees)?;
    map.insert("tree_height_max".into(), hmax);
    map.insert("tree_height_median".into(), hmed);
    map.insert("tree_height_mean".into(), hmean);

    insert_vector(
        &mut map,
        &phrase_stats(
            &trees,
            &[("NP", "np"), ("VP", "vp"), ("PP", "pp")],
            &tagset.punctuation,
        )?,
    );
    insert_vector(&mut map, &syntactic_complexity(&trees, &tagset.punctuation)?);

    let cfg = cfg_block(&trees, vocab);
    registry_en().assemble(&map, vocab, &cfg)
}

/// Mandarin feature vector: narrative length (sentences, characters, mean
/// sentence length), TTR and zipf statistics, the per-tag CTB POS block,
/// tree statistics, and the CFG count block (absolute counts). 143 columns
/// with the shipped registry and a full 60-production vocabulary.
pub fn extract_mandarin(
    narration: &Narration,
    lexicon: &FrequencyLexicon,
    vocab: &CfgVocabulary,
) -> Result<FeatureVector> {
    if narration.lang != "zh" {
        return Err(Error::Narration {
            id: narration.id.clone(),
            msg: format!("extract_mandarin on language '{}'", narration.lang),
        });
    }
    if vocab.mode != CfgMode::Count {
        return Err(Error::Invalid(
            "extract_mandarin requires a count-mode vocabulary".into(),
        ));
    }
    let tagset = tagset_zh();
    let trees = narration.parse_trees()?;
    let tokens = content_tokens(narration, tagset);
    if tokens.is_empty() {
        return Err(Error::Narration {
            id: narration.id.clone(),
            msg: "no non-punctuation tokens".into(),
        });
    }

    let mut map = BTreeMap::new();
    map.insert("sentence_count".into(), narration.sentences.len() as f64);
    let surfaces: Vec<&str> = tokens.iter().map(|(s, _)| *s).collect();
    let char_count: usize = surfaces.iter().map(|s| s.chars().count()).sum();
    map.insert("character_count".into(), char_count as f64);
    map.insert(
        "mean_sentence_length".into(),
        tokens.len() as f64 / narration.sentences.len() as f64,
    );

    let folded: Vec<String> = surfaces.iter().map(|s| s.to_lowercase()).collect();
    map.insert("ttr".into(), crate::featx::richness::ttr(&folded));

    let mut zipf: Vec<f64> = surfaces.iter().map(|s| lexicon.lookup(s)).collect();
    map.insert("zipf_mean".into(), mean_or(&zipf, 0.0));
    map.insert("zipf_median".into(), median_or(&mut zipf, 0.0));

    let char_lens: Vec<f64> = surfaces.iter().map(|s| s.chars().count() as f64).collect();
    map.insert("mean_word_length".into(), mean_or(&char_lens, 0.0));

    insert_vector(&mut map, &pos_counts(narration, tagset)?);

    let (hmax, hmed, hmean) = tree_stats(&trees)?;
    map.insert("tree_height_max".into(), hmax);
    map.insert("tree_height_median".into(), hmed);
    map.insert("tree_height_mean".into(), hmean);

    let cfg = cfg_block(&trees, vocab);
    registry_zh().assemble(&map, vocab, &cfg)
}

/// Dispatch on narration language.
pub fn extract(
    narration: &Narration,
    lexicon: &FrequencyLexicon,
    vocab: &CfgVocabulary,
) -> Result<FeatureVector> {
    match narration.lang.as_str() {
        "en" => extract_english(narration, lexicon, vocab),
        "zh" => extract_mandarin(narration, lexicon, vocab),
        other => Err(Error::Invalid(format!("no extractor for language '{}'", other))),
    }
}
