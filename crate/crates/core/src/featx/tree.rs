//! Penn-Treebank-style bracketed parse trees: reading, yields, heights, and
//! CFG production counts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Arbitrarily wide constituency tree. Leaves carry surface tokens; internal
/// nodes carry nonterminal labels. A preterminal is an internal node all of
/// whose children are leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Node { label: String, children: Vec<ParseTree> },
    Leaf { token: String },
}

impl ParseTree {
    pub fn is_preterminal(&self) -> bool {
        match self {
            ParseTree::Node { children, .. } => {
                !children.is_empty() && children.iter().all(|c| matches!(c, ParseTree::Leaf { .. }))
            }
            ParseTree::Leaf { .. } => false,
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            ParseTree::Node { label, .. } => Some(label),
            ParseTree::Leaf { .. } => None,
        }
    }

    /// Leaf tokens in order.
    pub fn leaf_tokens(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ParseTree::Leaf { token } => out.push(token),
            ParseTree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// (preterminal label, token) pairs in yield order.
    pub fn preterminals(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_preterminals(&mut out);
        out
    }

    fn collect_preterminals<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        if let ParseTree::Node { label, children } = self {
            for c in children {
                match c {
                    ParseTree::Leaf { token } => out.push((label, token)),
                    ParseTree::Node { .. } => c.collect_preterminals(out),
                }
            }
        }
    }

    /// Height with leaves at 0, so a preterminal over its leaf has height 1.
    pub fn height(&self) -> usize {
        match self {
            ParseTree::Leaf { .. } => 0,
            ParseTree::Node { children, .. } => {
                1 + children.iter().map(|c| c.height()).max().unwrap_or(0)
            }
        }
    }

    /// Number of leaf tokens under this node.
    pub fn yield_len(&self) -> usize {
        match self {
            ParseTree::Leaf { .. } => 1,
            ParseTree::Node { children, .. } => children.iter().map(|c| c.yield_len()).sum(),
        }
    }

    /// Bracketed rendering, inverse of [`parse_bracketed`].
    pub fn render(&self) -> String {
        match self {
            ParseTree::Leaf { token } => token.clone(),
            ParseTree::Node { label, children } => {
                let inner: Vec<String> = children.iter().map(|c| c.render()).collect();
                format!("({} {})", label, inner.join(" "))
            }
        }
    }
}

/// Read a single bracketed tree such as `(NP (DT the) (NN dog))`.
/// Reports errors with a character offset into the input.
pub fn parse_bracketed(s: &str) -> Result<ParseTree> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    skip_ws(&chars, &mut pos);
    if pos >= chars.len() {
        return Err(Error::Tree {
            offset: pos,
            msg: "empty input".into(),
        });
    }
    let tree = parse_node(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos < chars.len() {
        return Err(Error::Tree {
            offset: pos,
            msg: format!("trailing input after tree: '{}'", chars[pos]),
        });
    }
    match &tree {
        ParseTree::Leaf { .. } => Err(Error::Tree {
            offset: 0,
            msg: "bare token is not a tree".into(),
        }),
        ParseTree::Node { .. } => Ok(tree),
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn read_atom(chars: &[char], pos: &mut usize) -> String {
    let start = *pos;
    while *pos < chars.len() && !chars[*pos].is_whitespace() && chars[*pos] != '(' && chars[*pos] != ')'
    {
        *pos += 1;
    }
    chars[start..*pos].iter().collect()
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<ParseTree> {
    skip_ws(chars, pos);
    if *pos >= chars.len() {
        return Err(Error::Tree {
            offset: *pos,
            msg: "unexpected end of input".into(),
        });
    }
    if chars[*pos] != '(' {
        let atom = read_atom(chars, pos);
        if atom.is_empty() {
            return Err(Error::Tree {
                offset: *pos,
                msg: format!("unexpected character '{}'", chars[*pos]),
            });
        }
        return Ok(ParseTree::Leaf { token: atom });
    }
    *pos += 1; // consume '('
    skip_ws(chars, pos);
    let label = read_atom(chars, pos);
    if label.is_empty() {
        return Err(Error::Tree {
            offset: *pos,
            msg: "node without label".into(),
        });
    }
    let mut children = Vec::new();
    loop {
        skip_ws(chars, pos);
        if *pos >= chars.len() {
            return Err(Error::Tree {
                offset: *pos,
                msg: "unbalanced parentheses: missing ')'".into(),
            });
        }
        if chars[*pos] == ')' {
            *pos += 1;
            break;
        }
        children.push(parse_node(chars, pos)?);
    }
    if children.is_empty() {
        return Err(Error::Tree {
            offset: *pos,
            msg: format!("node '{}' has no children", label),
        });
    }
    Ok(ParseTree::Node { label, children })
}

/// Max, median, and mean of per-tree heights. Even-count median is the mean
/// of the two middle values.
pub fn tree_stats(trees: &[ParseTree]) -> Result<(f64, f64, f64)> {
    if trees.is_empty() {
        return Err(Error::Invalid("tree_stats: no trees".into()));
    }
    let mut heights: Vec<f64> = trees.iter().map(|t| t.height() as f64).collect();
    let max = heights.iter().cloned().fold(f64::MIN, f64::max);
    let mean = heights.iter().sum::<f64>() / heights.len() as f64;
    heights.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = heights.len();
    let median = if n % 2 == 1 {
        heights[n / 2]
    } else {
        (heights[n / 2 - 1] + heights[n / 2]) / 2.0
    };
    Ok((max, median, mean))
}

/// Render an internal rewrite as `LHS → RHS₁ RHS₂ ...`.
pub fn production_string(label: &str, children: &[ParseTree]) -> String {
    let rhs: Vec<&str> = children.iter().filter_map(|c| c.label()).collect();
    format!("{} → {}", label, rhs.join(" "))
}

/// Count every internal-node rewrite over the trees. Preterminal-to-token
/// rewrites are excluded; a node with any leaf child is treated as a
/// preterminal-like rewrite and skipped.
pub fn count_productions(trees: &[ParseTree]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for tree in trees {
        collect_productions(tree, &mut counts);
    }
    counts
}

fn collect_productions(tree: &ParseTree, counts: &mut BTreeMap<String, usize>) {
    if let ParseTree::Node { label, children } = tree {
        let all_nodes = children.iter().all(|c| matches!(c, ParseTree::Node { .. }));
        if all_nodes {
            *counts.entry(production_string(label, children)).or_insert(0) += 1;
        }
        for c in children {
            collect_productions(c, counts);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_english_fixture() {
        let t = parse_bracketed("(NP (DT the) (NN dog))").unwrap();
        assert_eq!(t.leaf_tokens(), vec!["the", "dog"]);
        let pts = t.preterminals();
        assert_eq!(pts, vec![("DT", "the"), ("NN", "dog")]);
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn parses_mandarin_fixture() {
        let t = parse_bracketed("(S (NP (PN 他)) (VP (VV 跑)))").unwrap();
        assert_eq!(t.leaf_tokens(), vec!["他", "跑"]);
    }

    #[test]
    fn unbalanced_input_reports_end_offset() {
        let input = "(NP (DT the";
        let err = parse_bracketed(input).unwrap_err();
        match err {
            Error::Tree { offset, .. } => assert_eq!(offset, input.chars().count()),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_and_trailing_inputs_rejected() {
        assert!(parse_bracketed("").is_err());
        assert!(parse_bracketed("   ").is_err());
        assert!(parse_bracketed("(NP (DT the)) extra").is_err());
        assert!(parse_bracketed("bare").is_err());
    }

    #[test]
    fn height_stats_match_hand_counts() {
        let a = parse_bracketed("(NP (DT the) (NN dog))").unwrap(); // height 2
        let b = parse_bracketed("(S (NP (NP (DT the) (NN dog))) (VP (VBD ran)))").unwrap(); // height 4
        assert_eq!(a.height(), 2);
        assert_eq!(b.height(), 4);
        let (max, median, mean) = tree_stats(&[a.clone(), b]).unwrap();
        assert_eq!(max, 4.0);
        assert_eq!(median, 3.0);
        assert_eq!(mean, 3.0);
        let (mx, md, mn) = tree_stats(&[a]).unwrap();
        assert_eq!((mx, md, mn), (2.0, 2.0, 2.0));
    }

    #[test]
    fn production_counts_exclude_preterminals() {
        let t = parse_bracketed("(NP (DT the) (NN dog))").unwrap();
        let counts = count_productions(std::slice::from_ref(&t));
        assert_eq!(counts.len(), 1);
        assert_eq!(counts["NP → DT NN"], 1);
    }

    #[test]
    fn production_counts_are_linear_in_input() {
        let t = parse_bracketed("(S (NP (PN 他)) (VP (VV 跑)))").unwrap();
        let one = count_productions(std::slice::from_ref(&t));
        assert_eq!(one["S → NP VP"], 1);
        assert_eq!(one["NP → PN"], 1);
        assert_eq!(one["VP → VV"], 1);
        let two = count_productions(&[t.clone(), t]);
        for (k, v) in &one {
            assert_eq!(two[k], v * 2);
        }
    }

    #[test]
    fn production_totals_equal_internal_non_preterminal_nodes() {
        let t = parse_bracketed(
            "(S (NP (DT the) (NN dog)) (VP (VBD saw) (NP (DT the) (NN cat))))",
        )
        .unwrap();
        fn count_internal(t: &ParseTree) -> usize {
            match t {
                ParseTree::Leaf { .. } => 0,
                ParseTree::Node { children, .. } => {
                    let own = usize::from(children.iter().all(|c| matches!(c, ParseTree::Node { .. })));
                    own + children.iter().map(count_internal).sum::<usize>()
                }
            }
        }
        let counts = count_productions(std::slice::from_ref(&t));
        let total: usize = counts.values().sum();
        assert_eq!(total, count_internal(&t));
    }

    #[test]
    fn render_round_trips() {
        let src = "(S (NP (PN 他)) (VP (VV 跑)))";
        let t = parse_bracketed(src).unwrap();
        assert_eq!(t.render(), src);
        assert_eq!(parse_bracketed(&t.render()).unwrap(), t);
    }
}
