//! Vocabulary-richness measures over a case-folded token stream: TTR, the
//! moving-average TTR family, Honoré's statistic, and Brunét's index.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::featx::matrix::FeatureVector;

/// Windows used for the moving-average type-token ratio.
pub const MATTR_WINDOWS: [usize; 5] = [10, 20, 30, 40, 50];

/// Honoré's statistic diverges when every type is a hapax (V₁ = V). The
/// denominator 1 − V₁/V is floored at this value, capping the statistic at
/// 20000·ln N instead of dropping the narration.
pub const HONORE_EPS: f64 = 0.005;

fn type_counts(tokens: &[String]) -> HashMap<&str, usize> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_insert(0) += 1;
    }
    counts
}

/// Distinct types / total tokens.
pub fn ttr(tokens: &[String]) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    type_counts(tokens).len() as f64 / tokens.len() as f64
}

/// Mean TTR over all sliding windows of size `w`; a single window of size N
/// when N < w.
pub fn mattr(tokens: &[String], w: usize) -> f64 {
    let n = tokens.len();
    if n == 0 {
        return 0.0;
    }
    if n <= w {
        return ttr(tokens);
    }
    // maintain window type counts incrementally
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in &tokens[..w] {
        *counts.entry(t.as_str()).or_insert(0) += 1;
    }
    let mut total = counts.len() as f64 / w as f64;
    let mut windows = 1usize;
    for i in w..n {
        let out = tokens[i - w].as_str();
        match counts.get_mut(out) {
            Some(c) if *c > 1 => *c -= 1,
            _ => {
                counts.remove(out);
            }
        }
        *counts.entry(tokens[i].as_str()).or_insert(0) += 1;
        total += counts.len() as f64 / w as f64;
        windows += 1;
    }
    total / windows as f64
}

/// Honoré R = 100·ln(N) / (1 − V₁/V), with the V₁ = V singularity capped.
pub fn honore(tokens: &[String]) -> f64 {
    let n = tokens.len() as f64;
    if tokens.is_empty() {
        return 0.0;
    }
    let counts = type_counts(tokens);
    let v = counts.len() as f64;
    let v1 = counts.values().filter(|&&c| c == 1).count() as f64;
    let denom = (1.0 - v1 / v).max(HONORE_EPS);
    100.0 * n.ln() / denom
}

/// Brunét W = N^(V^(−0.165)).
pub fn brunet(tokens: &[String]) -> f64 {
    let n = tokens.len() as f64;
    if tokens.is_empty() {
        return 0.0;
    }
    let v = type_counts(tokens).len() as f64;
    n.powf(v.powf(-0.165))
}

/// The full richness block: ttr, mattr_{10,20,30,40,50}, honore, brunet.
/// Tokens are compared case-folded.
pub fn lexical_richness(tokens: &[&str]) -> Result<FeatureVector> {
    if tokens.is_empty() {
        return Err(Error::Invalid("lexical_richness: no tokens".into()));
    }
    let folded: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut names = vec!["ttr".to_string()];
    let mut values = vec![ttr(&folded)];
    for w in MATTR_WINDOWS {
        names.push(format!("mattr_{}", w));
        values.push(mattr(&folded, w));
    }
    names.push("honore_statistic".into());
    values.push(honore(&folded));
    names.push("brunet_index".into());
    values.push(brunet(&folded));
    FeatureVector::new(names, values)
}
