//! Data-driven feature registries. The per-language inventories are manifest
//! files listing feature ids in canonical order plus a declared CFG block,
//! so column counts are auditable without reading extraction code.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::featx::matrix::FeatureVector;
use crate::featx::vocab::{CfgMode, CfgVocabulary};

#[derive(Debug, Clone)]
pub struct FeatureRegistry {
    pub lang: String,
    /// canonical order of the non-CFG features
    pub names: Vec<String>,
    pub cfg_mode: CfgMode,
    /// maximum CFG block size (vocabulary top-k)
    pub cfg_size: usize,
}

impl FeatureRegistry {
    pub fn parse(content: &str, label: &str, lang: &str) -> Result<FeatureRegistry> {
        let mut names = Vec::new();
        let mut cfg: Option<(CfgMode, usize)> = None;
        for (lineno, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("@cfg_block") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::Malformed {
                        path: label.into(),
                        line: lineno + 1,
                        msg: "@cfg_block takes mode and size".into(),
                    });
                }
                let mode = match parts[0] {
                    "ratio" => CfgMode::Ratio,
                    "count" => CfgMode::Count,
                    other => {
                        return Err(Error::Malformed {
                            path: label.into(),
                            line: lineno + 1,
                            msg: format!("unknown cfg mode '{}'", other),
                        })
                    }
                };
                let size: usize = parts[1].parse().map_err(|_| Error::Malformed {
                    path: label.into(),
                    line: lineno + 1,
                    msg: format!("bad cfg size '{}'", parts[1]),
                })?;
                cfg = Some((mode, size));
                continue;
            }
            names.push(line.to_string());
        }
        let (cfg_mode, cfg_size) = cfg.ok_or_else(|| Error::Invalid(format!(
            "{}: missing @cfg_block directive",
            label
        )))?;
        Ok(FeatureRegistry {
            lang: lang.to_string(),
            names,
            cfg_mode,
            cfg_size,
        })
    }

    /// Total column count with a full-size CFG vocabulary.
    pub fn full_len(&self) -> usize {
        self.names.len() + self.cfg_size
    }

    /// Assemble the final vector: manifest names looked up in `computed`,
    /// then one feature per vocabulary production. Every manifest name must
    /// have been computed; extra computed names are intermediate values and
    /// are dropped.
    pub fn assemble(
        &self,
        computed: &BTreeMap<String, f64>,
        vocab: &CfgVocabulary,
        cfg_values: &[f64],
    ) -> Result<FeatureVector> {
        if vocab.mode != self.cfg_mode {
            return Err(Error::Invalid(format!(
                "registry for '{}' expects a {:?} vocabulary, got {:?}",
                self.lang, self.cfg_mode, vocab.mode
            )));
        }
        if vocab.len() > self.cfg_size {
            return Err(Error::Invalid(format!(
                "vocabulary has {} productions but the registry caps the block at {}",
                vocab.len(),
                self.cfg_size
            )));
        }
        if cfg_values.len() != vocab.len() {
            return Err(Error::Invalid(
                "cfg value block does not match vocabulary length".into(),
            ));
        }
        let mut names = Vec::with_capacity(self.names.len() + vocab.len());
        let mut values = Vec::with_capacity(self.names.len() + vocab.len());
        for name in &self.names {
            let v = computed.get(name).ok_or_else(|| Error::Invalid(format!(
                "registry feature '{}' was not computed by the extractor",
                name
            )))?;
            names.push(name.clone());
            values.push(*v);
        }
        for (p, v) in vocab.productions.iter().zip(cfg_values.iter()) {
            names.push(p.clone());
            values.push(*v);
        }
        FeatureVector::new(names, values)
    }
}

/// English registry shipped with the crate (85 features + 100 CFG ratios).
pub fn registry_en() -> &'static FeatureRegistry {
    static REG: std::sync::OnceLock<FeatureRegistry> = std::sync::OnceLock::new();
    REG.get_or_init(|| {
        FeatureRegistry::parse(
            include_str!("../../data/features_en.txt"),
            "data/features_en.txt",
            "en",
        )
        .expect("shipped English registry must parse")
    })
}

/// Mandarin registry shipped with the crate (83 features + 60 CFG counts).
pub fn registry_zh() -> &'static FeatureRegistry {
    static REG: std::sync::OnceLock<FeatureRegistry> = std::sync::OnceLock::new();
    REG.get_or_init(|| {
        FeatureRegistry::parse(
            include_str!("../../data/features_zh.txt"),
            "data/features_zh.txt",
            "zh",
        )
        .expect("shipped Mandarin registry must parse")
    })
}
