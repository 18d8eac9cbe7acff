//! Per-category POS counts and ratios over a narration, driven by the
//! shipped tagset tables. Punctuation tokens are excluded from counts and
//! from the ratio denominator; unknown tags fall into the `other` bucket.

use std::collections::BTreeMap;

use crate::corpus::Narration;
use crate::error::Result;
use crate::featx::matrix::FeatureVector;
use crate::featx::tagset::TagsetTable;
use crate::featx::tree::ParseTree;

/// Count preterminals with `tag` directly under a node labeled `parent`.
fn structural_count(trees: &[ParseTree], tag: &str, parent: &str) -> usize {
    fn walk(t: &ParseTree, tag: &str, parent: &str, acc: &mut usize) {
        if let ParseTree::Node { label, children } = t {
            if label == parent {
                for c in children {
                    if let ParseTree::Node { label: cl, children: cc } = c {
                        if cl == tag && cc.iter().all(|x| matches!(x, ParseTree::Leaf { .. })) {
                            *acc += 1;
                        }
                    }
                }
            }
            for c in children {
                walk(c, tag, parent, acc);
            }
        }
    }
    let mut acc = 0;
    for t in trees {
        walk(t, tag, parent, &mut acc);
    }
    acc
}

/// Category counts, per-token ratios, and the table's special ratios.
/// `n` for ratios is the narration's non-punctuation token count.
pub fn pos_counts(narration: &Narration, tagset: &TagsetTable) -> Result<FeatureVector> {
    let tokens = narration.tokens();
    let counted: Vec<(&str, &str)> = tokens
        .iter()
        .filter(|(_, tag)| !tagset.is_punctuation(tag))
        .copied()
        .collect();
    let n = counted.len() as f64;

    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
    for cat in &tagset.categories {
        let c = counted.iter().filter(|(_, tag)| cat.tags.contains(*tag)).count();
        counts.insert(cat.name.clone(), c as f64);
    }
    for cat in &tagset.lemma_categories {
        let c = counted
            .iter()
            .filter(|(surface, tag)| *tag == cat.tag && cat.lemmas.contains(&surface.to_lowercase()))
            .count();
        counts.insert(cat.name.clone(), c as f64);
    }
    if !tagset.structural_categories.is_empty() {
        let trees = narration.parse_trees()?;
        for cat in &tagset.structural_categories {
            let c = structural_count(&trees, &cat.tag, &cat.parent);
            counts.insert(cat.name.clone(), c as f64);
        }
    }
    if let Some(other) = &tagset.other_category {
        let c = counted
            .iter()
            .filter(|(_, tag)| !tagset.inventory.contains(*tag))
            .count();
        counts.insert(other.clone(), c as f64);
    }

    // emission order: categories as declared, then other, then special ratios
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut emit = |name: &str, count: f64| {
        names.push(format!("{}_count", name));
        values.push(count);
        names.push(format!("{}_ratio", name));
        values.push(if n > 0.0 { count / n } else { 0.0 });
    };
    for cat in &tagset.categories {
        let c = counts[&cat.name];
        // lemma/structural categories interleave by declaration order in the
        // table file; they are appended after the plain categories here and
        // reordered by the registry at assembly time
        emit(&cat.name, c);
    }
    for cat in &tagset.lemma_categories {
        emit(&cat.name, counts[&cat.name]);
    }
    for cat in &tagset.structural_categories {
        emit(&cat.name, counts[&cat.name]);
    }
    if let Some(other) = &tagset.other_category {
        emit(other, counts[other]);
    }
    for r in &tagset.ratios {
        let num = counts.get(&r.numerator).copied().unwrap_or(0.0);
        let den = counts.get(&r.denominator).copied().unwrap_or(0.0);
        names.push(r.name.clone());
        values.push(if den > 0.0 { num / den } else { 0.0 });
    }

    FeatureVector::new(names, values)
}
