//! Named feature vectors and matrices — the lingua franca between stages —
//! plus their CSV form.

use std::io::Write;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered, named, finite feature values for one narration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::Invalid(format!(
                "feature vector: {} names vs {} values",
                names.len(),
                values.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Invalid(format!("duplicate feature name '{}'", n)));
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite value for feature '{}'",
                names[i]
            )));
        }
        Ok(FeatureVector { names, values })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }
}

/// Row-major matrix of features for many narrations, with row ids and
/// column names.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub ids: Vec<String>,
    pub names: Vec<String>,
    pub data: Array2<f64>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.data.ncols()
    }

    /// Stack per-narration vectors; all must share the same name order.
    pub fn from_rows(ids: Vec<String>, rows: &[FeatureVector]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Invalid("feature matrix needs at least one row".into()));
        }
        if ids.len() != rows.len() {
            return Err(Error::Invalid("ids/rows length mismatch".into()));
        }
        let names = rows[0].names.clone();
        for (i, r) in rows.iter().enumerate() {
            if r.names != names {
                return Err(Error::Invalid(format!(
                    "row {} has a different feature layout (column alignment violated)",
                    ids[i]
                )));
            }
        }
        let mut data = Array2::<f64>::zeros((rows.len(), names.len()));
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.values.iter().enumerate() {
                data[[i, j]] = *v;
            }
        }
        Ok(FeatureMatrix { ids, names, data })
    }

    pub fn row_vector(&self, i: usize) -> FeatureVector {
        FeatureVector {
            names: self.names.clone(),
            values: self.data.row(i).to_vec(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Array1<f64>> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|j| self.data.column(j).to_owned())
    }

    /// New matrix restricted to `names`, in the given order.
    pub fn select(&self, names: &[String]) -> Result<FeatureMatrix> {
        let mut idx = Vec::with_capacity(names.len());
        let mut missing = Vec::new();
        for n in names {
            match self.names.iter().position(|m| m == n) {
                Some(j) => idx.push(j),
                None => missing.push(n.clone()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::NameMismatch {
                missing,
                extra: vec![],
            });
        }
        let data = self.data.select(ndarray::Axis(1), &idx);
        Ok(FeatureMatrix {
            ids: self.ids.clone(),
            names: names.to_vec(),
            data,
        })
    }

    /// CSV with header `narration_id,<feature names...>`. Extra `# key=value`
    /// comment lines may precede the header.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("narration_id");
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (i, id) in self.ids.iter().enumerate() {
            out.push_str(id);
            for v in self.data.row(i) {
                out.push(',');
                out.push_str(&format!("{}", v));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path, comments: &[String]) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_csv(comments).as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    pub fn from_csv_str(content: &str, path_label: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut ids = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let line_num = lineno + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            match &names {
                None => {
                    if fields.first() != Some(&"narration_id") {
                        return Err(Error::Malformed {
                            path: path_label.into(),
                            line: line_num,
                            msg: "header must start with 'narration_id'".into(),
                        });
                    }
                    names = Some(fields[1..].iter().map(|s| s.to_string()).collect());
                }
                Some(ns) => {
                    if fields.len() != ns.len() + 1 {
                        return Err(Error::Malformed {
                            path: path_label.into(),
                            line: line_num,
                            msg: format!("expected {} fields, got {}", ns.len() + 1, fields.len()),
                        });
                    }
                    ids.push(fields[0].to_string());
                    let mut row = Vec::with_capacity(ns.len());
                    for f in &fields[1..] {
                        let v: f64 = f.parse().map_err(|_| Error::Malformed {
                            path: path_label.into(),
                            line: line_num,
                            msg: format!("not a number: '{}'", f),
                        })?;
                        row.push(v);
                    }
                    rows.push(row);
                }
            }
        }
        let names = names.ok_or_else(|| Error::Malformed {
            path: path_label.into(),
            line: 0,
            msg: "missing header".into(),
        })?;
        if rows.is_empty() {
            return Err(Error::Malformed {
                path: path_label.into(),
                line: 0,
                msg: "no data rows".into(),
            });
        }
        let mut data = Array2::<f64>::zeros((rows.len(), names.len()));
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                data[[i, j]] = *v;
            }
        }
        Ok(FeatureMatrix { ids, names, data })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&content, &path.display().to_string())
    }
}
