//! Versioned POS tag tables. The category definitions live in TSV files
//! shipped with the crate (`data/tagset_en.tsv`, `data/tagset_zh.tsv`) so
//! counts stay reproducible across builds.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// A named tag-set category emitting `<name>_count` and `<name>_ratio`.
#[derive(Debug, Clone)]
pub struct Category {
    pub name: String,
    pub tags: HashSet<String>,
}

/// Category defined by a tag plus a closed lemma list (e.g. demonstratives).
#[derive(Debug, Clone)]
pub struct LemmaCategory {
    pub name: String,
    pub tag: String,
    pub lemmas: HashSet<String>,
}

/// Category defined by a preterminal tag directly under a parent label
/// (e.g. subordinating conjunctions: IN heading SBAR).
#[derive(Debug, Clone)]
pub struct StructuralCategory {
    pub name: String,
    pub tag: String,
    pub parent: String,
}

/// Special ratio of two category counts (0 denominator → 0).
#[derive(Debug, Clone)]
pub struct RatioSpec {
    pub name: String,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone)]
pub struct TagsetTable {
    pub lang: String,
    pub inventory: HashSet<String>,
    pub punctuation: HashSet<String>,
    pub categories: Vec<Category>,
    pub lemma_categories: Vec<LemmaCategory>,
    pub structural_categories: Vec<StructuralCategory>,
    /// bucket name for non-punctuation tokens with tags outside the inventory
    pub other_category: Option<String>,
    pub ratios: Vec<RatioSpec>,
}

impl TagsetTable {
    pub fn is_punctuation(&self, tag: &str) -> bool {
        self.punctuation.contains(tag)
    }

    /// Parse the TSV directive format documented in the shipped files.
    pub fn parse(content: &str, label: &str) -> Result<TagsetTable> {
        let mut table = TagsetTable {
            lang: String::new(),
            inventory: HashSet::new(),
            punctuation: HashSet::new(),
            categories: Vec::new(),
            lemma_categories: Vec::new(),
            structural_categories: Vec::new(),
            other_category: None,
            ratios: Vec::new(),
        };
        for (lineno, line) in content.lines().enumerate() {
            let line_num = lineno + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# tagset") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if let Some(lang) = parts.last() {
                    table.lang = lang.to_string();
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = |msg: &str| Error::Malformed {
                path: label.into(),
                line: line_num,
                msg: msg.into(),
            };
            let tags = |s: &str| -> HashSet<String> {
                s.split_whitespace().map(|t| t.to_string()).collect()
            };
            match fields[0] {
                "inventory" => {
                    if fields.len() != 2 {
                        return Err(bad("inventory takes one tag list"));
                    }
                    table.inventory = tags(fields[1]);
                }
                "punctuation" => {
                    if fields.len() != 2 {
                        return Err(bad("punctuation takes one tag list"));
                    }
                    table.punctuation = tags(fields[1]);
                }
                "category" => {
                    if fields.len() != 3 {
                        return Err(bad("category takes a name and a tag list"));
                    }
                    table.categories.push(Category {
                        name: fields[1].to_string(),
                        tags: tags(fields[2]),
                    });
                }
                "lemma_category" => {
                    if fields.len() != 4 {
                        return Err(bad("lemma_category takes name, tag, lemma list"));
                    }
                    table.lemma_categories.push(LemmaCategory {
                        name: fields[1].to_string(),
                        tag: fields[2].to_string(),
                        lemmas: fields[3].split_whitespace().map(|s| s.to_lowercase()).collect(),
                    });
                }
                "structural_category" => {
                    if fields.len() != 4 {
                        return Err(bad("structural_category takes name, tag, parent"));
                    }
                    table.structural_categories.push(StructuralCategory {
                        name: fields[1].to_string(),
                        tag: fields[2].to_string(),
                        parent: fields[3].to_string(),
                    });
                }
                "other_category" => {
                    if fields.len() != 2 {
                        return Err(bad("other_category takes a name"));
                    }
                    table.other_category = Some(fields[1].to_string());
                }
                "ratio" => {
                    if fields.len() != 4 {
                        return Err(bad("ratio takes name, numerator, denominator"));
                    }
                    table.ratios.push(RatioSpec {
                        name: fields[1].to_string(),
                        numerator: fields[2].to_string(),
                        denominator: fields[3].to_string(),
                    });
                }
                other => return Err(bad(&format!("unknown directive '{}'", other))),
            }
        }
        if table.inventory.is_empty() {
            return Err(Error::Invalid(format!("{}: missing inventory", label)));
        }
        Ok(table)
    }
}

/// English (PTB) tag table shipped with the crate.
pub fn tagset_en() -> &'static TagsetTable {
    static TABLE: std::sync::OnceLock<TagsetTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        TagsetTable::parse(include_str!("../../data/tagset_en.tsv"), "data/tagset_en.tsv")
            .expect("shipped English tagset must parse")
    })
}

/// Mandarin (CTB) tag table shipped with the crate.
pub fn tagset_zh() -> &'static TagsetTable {
    static TABLE: std::sync::OnceLock<TagsetTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        TagsetTable::parse(include_str!("../../data/tagset_zh.tsv"), "data/tagset_zh.tsv")
            .expect("shipped Mandarin tagset must parse")
    })
}

pub fn tagset_for(lang: &str) -> Result<&'static TagsetTable> {
    match lang {
        "en" => Ok(tagset_en()),
        "zh" => Ok(tagset_zh()),
        other => Err(Error::Invalid(format!("no tagset for language '{}'", other))),
    }
}
