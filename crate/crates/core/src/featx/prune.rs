//! Near-constant feature pruning: drop any feature whose single most common
//! value (exact equality) covers strictly more than half the rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featx::matrix::FeatureMatrix;

/// Record of a pruning pass: which features survived and which were dropped,
/// with the modal fraction that condemned them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneMask {
    pub kept: Vec<String>,
    pub dropped: Vec<(String, f64)>,
}

impl PruneMask {
    /// Mask that keeps every column unchanged (used in feature-matrix mode
    /// where pruning happened upstream or is not wanted).
    pub fn identity(names: &[String]) -> Self {
        PruneMask {
            kept: names.to_vec(),
            dropped: vec![],
        }
    }

    pub fn apply(&self, matrix: &FeatureMatrix) -> Result<FeatureMatrix> {
        matrix.select(&self.kept)
    }
}

fn modal_fraction(col: ndarray::ArrayView1<f64>) -> f64 {
    let mut counts: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    for v in col {
        *counts.entry(v.to_bits()).or_insert(0) += 1;
    }
    let max = counts.values().copied().max().unwrap_or(0);
    max as f64 / col.len() as f64
}

/// Returns the pruned matrix and the mask. Errors when every feature is
/// near-constant.
pub fn prune_constant(matrix: &FeatureMatrix) -> Result<(FeatureMatrix, PruneMask)> {
    if matrix.n_rows() == 0 {
        return Err(Error::Invalid("prune_constant: empty matrix".into()));
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (j, name) in matrix.names.iter().enumerate() {
        let frac = modal_fraction(matrix.data.column(j));
        if frac > 0.5 {
            dropped.push((name.clone(), frac));
        } else {
            kept.push(name.clone());
        }
    }
    if kept.is_empty() {
        return Err(Error::Invalid(
            "no informative features: every column is constant for more than half of the dataset"
                .into(),
        ));
    }
    let mask = PruneMask { kept, dropped };
    let pruned = mask.apply(matrix)?;
    Ok((pruned, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featx::matrix::FeatureVector;

    fn matrix(names: &[&str], rows: &[Vec<f64>]) -> FeatureMatrix {
        let vecs: Vec<FeatureVector> = rows
            .iter()
            .map(|r| {
                FeatureVector::new(names.iter().map(|s| s.to_string()).collect(), r.clone())
                    .unwrap()
            })
            .collect();
        let ids = (0..rows.len()).map(|i| format!("r{i}")).collect();
        FeatureMatrix::from_rows(ids, &vecs).unwrap()
    }

    #[test]
    fn majority_constant_column_is_dropped() {
        // 6 of 10 rows share the value 0 -> modal fraction 0.6 -> dropped
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![if i < 6 { 0.0 } else { i as f64 }, i as f64])
            .collect();
        let (pruned, mask) = prune_constant(&matrix(&["mostly_zero", "varies"], &rows)).unwrap();
        assert_eq!(pruned.names, vec!["varies"]);
        assert_eq!(mask.dropped.len(), 1);
        assert_eq!(mask.dropped[0].0, "mostly_zero");
        assert!((mask.dropped[0].1 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn exactly_half_is_kept() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![if i < 5 { 0.0 } else { i as f64 }])
            .collect();
        let (pruned, mask) = prune_constant(&matrix(&["half_zero"], &rows)).unwrap();
        assert_eq!(pruned.names, vec!["half_zero"]);
        assert!(mask.dropped.is_empty());
    }

    #[test]
    fn all_distinct_column_is_kept() {
        let rows: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let (_, mask) = prune_constant(&matrix(&["distinct"], &rows)).unwrap();
        assert_eq!(mask.kept, vec!["distinct"]);
    }

    #[test]
    fn all_dropped_is_an_error() {
        let rows: Vec<Vec<f64>> = (0..4).map(|_| vec![1.0, 2.0]).collect();
        let err = prune_constant(&matrix(&["c1", "c2"], &rows)).unwrap_err();
        assert!(err.to_string().contains("no informative features"));
    }

    #[test]
    fn kept_and_dropped_partition_the_names() {
        let rows: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![i as f64, 1.0, (i % 2) as f64])
            .collect();
        let (_, mask) = prune_constant(&matrix(&["a", "b", "c"], &rows)).unwrap();
        let mut all: Vec<String> = mask.kept.clone();
        all.extend(mask.dropped.iter().map(|(n, _)| n.clone()));
        all.sort();
        assert_eq!(all, vec!["a", "b", "c"]);
    }
}
