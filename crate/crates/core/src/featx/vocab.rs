//! CFG production vocabularies: the most frequent rewrites over a corpus,
//! used as the trailing feature block in each language.

use serde::{Deserialize, Serialize};

use crate::corpus::Narration;
use crate::error::{Error, Result};
use crate::featx::tree::count_productions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CfgMode {
    /// production count divided by the narration's total production count
    Ratio,
    /// absolute occurrence count
    Count,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfgVocabulary {
    pub mode: CfgMode,
    pub productions: Vec<String>,
}

impl CfgVocabulary {
    pub fn len(&self) -> usize {
        self.productions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.productions.is_empty()
    }
}

/// Top `top_k` productions over the corpus by frequency; ties broken
/// lexicographically by production string. Returns fewer when the corpus has
/// fewer distinct productions.
pub fn build_cfg_vocab(narrations: &[Narration], top_k: usize, mode: CfgMode) -> Result<CfgVocabulary> {
    if narrations.is_empty() {
        return Err(Error::Invalid("build_cfg_vocab: no narrations".into()));
    }
    let mut counts: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    for n in narrations {
        let trees = n.parse_trees()?;
        for (prod, c) in count_productions(&trees) {
            *counts.entry(prod).or_insert(0) += c;
        }
    }
    let mut entries: Vec<(String, usize)> = counts.into_iter().collect();
    // stable order: count descending, then production string ascending
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries.truncate(top_k);
    Ok(CfgVocabulary {
        mode,
        productions: entries.into_iter().map(|(p, _)| p).collect(),
    })
}
