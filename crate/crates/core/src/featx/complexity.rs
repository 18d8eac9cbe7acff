//! Clause-level syntactic complexity and phrase statistics for English
//! trees, using a frozen tree-pattern table:
//!
//! - clause: S/SBAR/SINV/SQ node with a direct VP child
//! - dependent clause: clause with an SBAR ancestor
//! - T-unit: S/SINV/SQ node with no S/SBAR/SINV/SQ ancestor
//! - complex T-unit: T-unit containing at least one dependent clause
//! - coordinate phrase: NP/VP/ADJP/ADVP node with a direct CC child
//! - complex nominal: NP node with a direct JJ/JJR/JJS/PP/SBAR/VP child
//!
//! Unit lengths are counted in non-punctuation leaf tokens. All derived
//! ratios map a zero denominator to 0.

use std::collections::HashSet;

use crate::error::Result;
use crate::featx::matrix::FeatureVector;
use crate::featx::tree::ParseTree;

const CLAUSE_LABELS: [&str; 4] = ["S", "SBAR", "SINV", "SQ"];
const T_UNIT_LABELS: [&str; 3] = ["S", "SINV", "SQ"];
const COORD_LABELS: [&str; 4] = ["NP", "VP", "ADJP", "ADVP"];
const NOMINAL_MODIFIERS: [&str; 6] = ["JJ", "JJR", "JJS", "PP", "SBAR", "VP"];

struct Tally {
    clauses: Vec<usize>,            // token lengths
    t_units: Vec<usize>,
    dependent_clauses: Vec<usize>,
    coordinate_phrases: Vec<usize>,
    complex_t_units: usize,
    complex_nominals: usize,
    verb_phrases: usize,
}

fn non_punct_yield(node: &ParseTree, punctuation: &HashSet<String>) -> usize {
    node.preterminals()
        .iter()
        .filter(|(tag, _)| !punctuation.contains(*tag))
        .count()
}

fn has_child_labeled(children: &[ParseTree], label: &str) -> bool {
    children.iter().any(|c| c.label() == Some(label))
}

fn contains_dependent_clause(node: &ParseTree, under_sbar: bool) -> bool {
    if let ParseTree::Node { label, children } = node {
        let inside = under_sbar || label == "SBAR";
        if under_sbar && CLAUSE_LABELS.contains(&label.as_str()) && has_child_labeled(children, "VP")
        {
            return true;
        }
        return children.iter().any(|c| contains_dependent_clause(c, inside));
    }
    false
}

fn walk(
    node: &ParseTree,
    sbar_above: bool,
    clauseish_above: bool,
    punctuation: &HashSet<String>,
    tally: &mut Tally,
) {
    if let ParseTree::Node { label, children } = node {
        let len = non_punct_yield(node, punctuation);
        let label_str = label.as_str();

        if label_str == "VP" {
            tally.verb_phrases += 1;
        }
        if CLAUSE_LABELS.contains(&label_str) && has_child_labeled(children, "VP") {
            tally.clauses.push(len);
            if sbar_above {
                tally.dependent_clauses.push(len);
            }
        }
        if T_UNIT_LABELS.contains(&label_str) && !clauseish_above {
            tally.t_units.push(len);
            if contains_dependent_clause(node, false) {
                tally.complex_t_units += 1;
            }
        }
        if COORD_LABELS.contains(&label_str) && has_child_labeled(children, "CC") {
            tally.coordinate_phrases.push(len);
        }
        if label_str == "NP"
            && children
                .iter()
                .any(|c| c.label().is_some_and(|l| NOMINAL_MODIFIERS.contains(&l)))
        {
            tally.complex_nominals += 1;
        }

        let next_sbar = sbar_above || label_str == "SBAR";
        let next_clauseish = clauseish_above || CLAUSE_LABELS.contains(&label_str);
        for c in children {
            walk(c, next_sbar, next_clauseish, punctuation, tally);
        }
    }
}

fn mean(v: &[usize]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<usize>() as f64 / v.len() as f64
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// The syntactic-complexity feature block over a narration's trees.
pub fn syntactic_complexity(
    trees: &[ParseTree],
    punctuation: &HashSet<String>,
) -> Result<FeatureVector> {
    let mut tally = Tally {
        clauses: Vec::new(),
        t_units: Vec::new(),
        dependent_clauses: Vec::new(),
        coordinate_phrases: Vec::new(),
        complex_t_units: 0,
        complex_nominals: 0,
        verb_phrases: 0,
    };
    for t in trees {
        walk(t, false, false, punctuation, &mut tally);
    }
    let total_tokens: usize = trees.iter().map(|t| non_punct_yield(t, punctuation)).sum();
    let n_sent = trees.len() as f64;
    let c = tally.clauses.len() as f64;
    let t = tally.t_units.len() as f64;
    let dc = tally.dependent_clauses.len() as f64;
    let cp = tally.coordinate_phrases.len() as f64;
    let ct = tally.complex_t_units as f64;
    let cn = tally.complex_nominals as f64;
    let vp = tally.verb_phrases as f64;

    let names: Vec<String> = [
        "clause_count",
        "t_unit_count",
        "dependent_clause_count",
        "coordinate_phrase_count",
        "complex_t_unit_count",
        "complex_nominal_count",
        "verb_phrase_count",
        "mean_sentence_length",
        "mean_clause_length",
        "mean_t_unit_length",
        "mean_dependent_clause_length",
        "mean_coordinate_phrase_length",
        "clauses_per_sentence",
        "clauses_per_t_unit",
        "t_units_per_sentence",
        "dependent_clauses_per_clause",
        "dependent_clauses_per_t_unit",
        "complex_t_units_per_t_unit",
        "coordinate_phrases_per_t_unit",
        "coordinate_phrases_per_clause",
        "complex_nominals_per_t_unit",
        "complex_nominals_per_clause",
        "verb_phrases_per_t_unit",
        "subordinate_coordinate_ratio",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    let values = vec![
        c,
        t,
        dc,
        cp,
        ct,
        cn,
        vp,
        ratio(total_tokens as f64, n_sent),
        mean(&tally.clauses),
        mean(&tally.t_units),
        mean(&tally.dependent_clauses),
        mean(&tally.coordinate_phrases),
        ratio(c, n_sent),
        ratio(c, t),
        ratio(t, n_sent),
        ratio(dc, c),
        ratio(dc, t),
        ratio(ct, t),
        ratio(cp, t),
        ratio(cp, c),
        ratio(cn, t),
        ratio(cn, c),
        ratio(vp, t),
        ratio(dc, cp),
    ];

    FeatureVector::new(names, values)
}

/// Count, total non-punctuation yield length, and mean length for each
/// phrase label, emitted as `<prefix>_count`, `<prefix>_total_length`,
/// `<prefix>_mean_length`.
pub fn phrase_stats(
    trees: &[ParseTree],
    labels: &[(&str, &str)], // (tree label, feature prefix)
    punctuation: &HashSet<String>,
) -> Result<FeatureVector> {
    fn collect(node: &ParseTree, label: &str, punct: &HashSet<String>, out: &mut Vec<usize>) {
        if let ParseTree::Node { label: l, children } = node {
            if l == label {
                out.push(non_punct_yield(node, punct));
            }
            for c in children {
                collect(c, label, punct, out);
            }
        }
    }
    let mut names = Vec::new();
    let mut values = Vec::new();
    for (label, prefix) in labels {
        let mut lens = Vec::new();
        for t in trees {
            collect(t, label, punctuation, &mut lens);
        }
        names.push(format!("{}_count", prefix));
        values.push(lens.len() as f64);
        names.push(format!("{}_total_length", prefix));
        values.push(lens.iter().sum::<usize>() as f64);
        names.push(format!("{}_mean_length", prefix));
        values.push(mean(&lens));
    }
    FeatureVector::new(names, values)
}
