//! Disk-facing ingestion: narrations, parallel corpora, frequency lexicons,
//! task-score tables, and dialogue-window sampling.
//!
//! All loaders are pure and reentrant. Inputs are pre-tokenized and
//! pre-parsed; see the format notes on each loader.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featx::tree::{parse_bracketed, ParseTree};

/// One tokenized, parsed sentence. `tokens` pairs each surface form with its
/// POS tag; `parse` is the bracketed constituency tree over the same tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<(String, String)>,
    pub parse: String,
}

/// One transcript unit: the atom every later stage consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Narration {
    pub id: String,
    pub lang: String,
    pub sentences: Vec<Sentence>,
}

impl Narration {
    /// Check every structural invariant: at least one sentence, non-empty
    /// token lists, parses that re-derive the token surfaces and tags.
    pub fn validate(&self) -> Result<()> {
        if self.lang != "en" && self.lang != "zh" {
            return Err(Error::Narration {
                id: self.id.clone(),
                msg: format!("unknown language code '{}'", self.lang),
            });
        }
        if self.sentences.is_empty() {
            return Err(Error::Narration {
                id: self.id.clone(),
                msg: "narration has no sentences".into(),
            });
        }
        for (si, sent) in self.sentences.iter().enumerate() {
            if sent.tokens.is_empty() {
                return Err(Error::Narration {
                    id: self.id.clone(),
                    msg: format!("sentence {} has no tokens", si),
                });
            }
            let tree = parse_bracketed(&sent.parse).map_err(|e| Error::Narration {
                id: self.id.clone(),
                msg: format!("sentence {}: {}", si, e),
            })?;
            let leaves: Vec<&str> = tree.leaf_tokens();
            let surfaces: Vec<&str> = sent.tokens.iter().map(|(s, _)| s.as_str()).collect();
            if leaves != surfaces {
                return Err(Error::Narration {
                    id: self.id.clone(),
                    msg: format!(
                        "sentence {}: parse leaves {:?} do not match tokens {:?}",
                        si, leaves, surfaces
                    ),
                });
            }
            let pre_tags: Vec<&str> = tree.preterminals().iter().map(|(t, _)| *t).collect();
            let tags: Vec<&str> = sent.tokens.iter().map(|(_, t)| t.as_str()).collect();
            if pre_tags != tags {
                return Err(Error::Narration {
                    id: self.id.clone(),
                    msg: format!(
                        "sentence {}: preterminal tags {:?} do not match token tags {:?}",
                        si, pre_tags, tags
                    ),
                });
            }
        }
        Ok(())
    }

    /// Parse every sentence's bracketed tree.
    pub fn parse_trees(&self) -> Result<Vec<ParseTree>> {
        self.sentences
            .iter()
            .map(|s| {
                parse_bracketed(&s.parse).map_err(|e| Error::Narration {
                    id: self.id.clone(),
                    msg: e.to_string(),
                })
            })
            .collect()
    }

    /// All (surface, tag) pairs across sentences, in order.
    pub fn tokens(&self) -> Vec<(&str, &str)> {
        self.sentences
            .iter()
            .flat_map(|s| s.tokens.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            .collect()
    }
}

/// A source/target narration pair from a parallel corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub pair_id: String,
    pub source: Narration,
    pub target: Narration,
}

/// Narration plus its clinical group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledNarration {
    pub narration: Narration,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Dementia,
    Control,
}

/// Word → zipf-scale frequency with a default for out-of-vocabulary tokens,
/// so mean-frequency features are always defined.
#[derive(Debug, Clone)]
pub struct FrequencyLexicon {
    map: HashMap<String, f64>,
    pub default_zipf: f64,
}

impl FrequencyLexicon {
    pub fn new(entries: Vec<(String, f64)>, default_zipf: f64) -> Result<Self> {
        let mut map = HashMap::new();
        for (k, v) in entries {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Invalid(format!(
                    "lexicon frequency for '{}' must be finite and >= 0, got {}",
                    k, v
                )));
            }
            map.insert(k.to_lowercase(), v);
        }
        Ok(FrequencyLexicon { map, default_zipf })
    }

    pub fn lookup(&self, token: &str) -> f64 {
        *self
            .map
            .get(&token.to_lowercase())
            .unwrap_or(&self.default_zipf)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Per-patient task scores with a shared task list.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskScoreTable {
    pub patient_ids: Vec<String>,
    pub task_names: Vec<String>,
    /// row-major: rows[i] aligns with patient_ids[i]
    pub rows: Vec<Vec<f64>>,
}

/// Load narrations from JSONL: one object per line, blank lines skipped.
///
/// Schema: `{"id": str, "lang": "en"|"zh", "sentences":
/// [{"tokens": [[surface, pos], ...], "parse": str}]}`
pub fn load_narrations(path: &Path, lang: &str) -> Result<Vec<Narration>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.display().to_string();
    let mut out = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let narration: Narration = serde_json::from_str(line).map_err(|e| Error::Malformed {
            path: label.clone(),
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        if narration.lang != lang {
            return Err(Error::Narration {
                id: narration.id.clone(),
                msg: format!("expected language '{}', found '{}'", lang, narration.lang),
            });
        }
        narration.validate()?;
        out.push(narration);
    }
    Ok(out)
}

/// Write narrations as JSONL (inverse of [`load_narrations`]).
pub fn write_narrations(path: &Path, narrations: &[Narration]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    for n in narrations {
        let line = serde_json::to_string(n).map_err(|e| Error::Invalid(e.to_string()))?;
        writeln!(f, "{}", line).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawPair {
    pair_id: String,
    source: Option<Narration>,
    target: Option<Narration>,
}

/// Load a parallel corpus from JSONL:
/// `{"pair_id": str, "source": <Narration>, "target": <Narration>}`.
pub fn load_parallel(path: &Path) -> Result<Vec<ParallelPair>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.display().to_string();
    let mut out = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawPair = serde_json::from_str(line).map_err(|e| Error::Malformed {
            path: label.clone(),
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        let source = raw.source.ok_or_else(|| Error::Invalid(format!(
            "pair {}: missing source narration",
            raw.pair_id
        )))?;
        let target = raw.target.ok_or_else(|| Error::Invalid(format!(
            "pair {}: missing target narration",
            raw.pair_id
        )))?;
        source.validate()?;
        target.validate()?;
        if source.lang == target.lang {
            return Err(Error::Invalid(format!(
                "pair {}: source and target share language '{}'",
                raw.pair_id, source.lang
            )));
        }
        out.push(ParallelPair {
            pair_id: raw.pair_id,
            source,
            target,
        });
    }
    Ok(out)
}

pub fn write_parallel(path: &Path, pairs: &[ParallelPair]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    for p in pairs {
        let line = serde_json::to_string(p).map_err(|e| Error::Invalid(e.to_string()))?;
        writeln!(f, "{}", line).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Draw `n_samples` contiguous dialogue windows (with replacement) from a
/// parallel line stream. Window length is uniform on `[min_lines,
/// max_lines]` (clamped to the corpus length), the start index uniform over
/// valid positions; the same run of lines is concatenated on both sides.
/// Deterministic given `seed`.
pub fn sample_windows(
    lines: &[ParallelPair],
    n_samples: usize,
    min_lines: usize,
    max_lines: usize,
    seed: u64,
) -> Result<Vec<ParallelPair>> {
    if lines.is_empty() {
        return Err(Error::Invalid("sample_windows: empty corpus".into()));
    }
    if min_lines < 1 || min_lines > max_lines {
        return Err(Error::Invalid(format!(
            "sample_windows: need 1 <= min_lines <= max_lines, got {} and {}",
            min_lines, max_lines
        )));
    }
    let max_lines = max_lines.min(lines.len());
    let min_lines = min_lines.min(max_lines);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let len = rng.gen_range(min_lines..=max_lines);
        let start = rng.gen_range(0..=lines.len() - len);
        let window = &lines[start..start + len];
        let concat = |side: fn(&ParallelPair) -> &Narration, lang_tag: &str| Narration {
            id: format!("w{:06}.s{}.l{}.{}", i, start, len, lang_tag),
            lang: side(&window[0]).lang.clone(),
            sentences: window
                .iter()
                .flat_map(|p| side(p).sentences.iter().cloned())
                .collect(),
        };
        out.push(ParallelPair {
            pair_id: format!("w{:06}.s{}.l{}", i, start, len),
            source: concat(|p| &p.source, "src"),
            target: concat(|p| &p.target, "tgt"),
        });
    }
    Ok(out)
}

/// Load a frequency lexicon from TSV (`token<TAB>zipf` per line). An
/// optional first line `#default <float>` sets the out-of-vocabulary zipf;
/// it defaults to 0.
pub fn load_lexicon(path: &Path) -> Result<FrequencyLexicon> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.display().to_string();
    let mut default_zipf = 0.0f64;
    let mut entries = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        let line_num = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#default") {
            default_zipf = rest.trim().parse().map_err(|_| Error::Malformed {
                path: label.clone(),
                line: line_num,
                msg: format!("bad default zipf: '{}'", rest.trim()),
            })?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (token, freq) = line.split_once('\t').ok_or_else(|| Error::Malformed {
            path: label.clone(),
            line: line_num,
            msg: "expected token<TAB>zipf".into(),
        })?;
        let zipf: f64 = freq.trim().parse().map_err(|_| Error::Malformed {
            path: label.clone(),
            line: line_num,
            msg: format!("not a number: '{}'", freq.trim()),
        })?;
        entries.push((token.to_string(), zipf));
    }
    FrequencyLexicon::new(entries, default_zipf)
}

/// Load narration labels from CSV with header `narration_id,label` and
/// label values `dementia` or `control`.
pub fn load_labels(path: &Path) -> Result<Vec<(String, Label)>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label_path = path.display().to_string();
    let mut out = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in content.lines().enumerate() {
        let line_num = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "narration_id,label" {
                return Err(Error::Malformed {
                    path: label_path.clone(),
                    line: line_num,
                    msg: "header must be narration_id,label".into(),
                });
            }
            saw_header = true;
            continue;
        }
        let (id, lab) = line.split_once(',').ok_or_else(|| Error::Malformed {
            path: label_path.clone(),
            line: line_num,
            msg: "expected narration_id,label".into(),
        })?;
        let lab = match lab.trim() {
            "dementia" => Label::Dementia,
            "control" => Label::Control,
            other => {
                return Err(Error::Malformed {
                    path: label_path.clone(),
                    line: line_num,
                    msg: format!("unknown label '{}'", other),
                })
            }
        };
        out.push((id.to_string(), lab));
    }
    if !saw_header {
        return Err(Error::Malformed {
            path: label_path,
            line: 0,
            msg: "missing header".into(),
        });
    }
    Ok(out)
}

/// Load patient task scores from CSV with header `patient_id,<task1>,...`.
pub fn load_task_scores(path: &Path) -> Result<TaskScoreTable> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.display().to_string();
    let mut task_names: Option<Vec<String>> = None;
    let mut patient_ids = Vec::new();
    let mut rows = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (lineno, line) in content.lines().enumerate() {
        let line_num = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match &task_names {
            None => {
                if fields.first() != Some(&"patient_id") || fields.len() < 2 {
                    return Err(Error::Malformed {
                        path: label.clone(),
                        line: line_num,
                        msg: "header must be patient_id,<task1>,...".into(),
                    });
                }
                task_names = Some(fields[1..].iter().map(|s| s.to_string()).collect());
            }
            Some(tasks) => {
                if fields.len() != tasks.len() + 1 {
                    return Err(Error::Malformed {
                        path: label.clone(),
                        line: line_num,
                        msg: format!("expected {} fields, got {}", tasks.len() + 1, fields.len()),
                    });
                }
                let id = fields[0].to_string();
                if !seen.insert(id.clone()) {
                    return Err(Error::Malformed {
                        path: label.clone(),
                        line: line_num,
                        msg: format!("duplicate patient_id '{}'", id),
                    });
                }
                let mut row = Vec::with_capacity(tasks.len());
                for f in &fields[1..] {
                    let v: f64 = f.trim().parse().map_err(|_| Error::Malformed {
                        path: label.clone(),
                        line: line_num,
                        msg: format!("bad score: '{}'", f),
                    })?;
                    row.push(v);
                }
                patient_ids.push(id);
                rows.push(row);
            }
        }
    }
    let task_names = task_names.ok_or_else(|| Error::Malformed {
        path: label.clone(),
        line: 0,
        msg: "missing header".into(),
    })?;
    if patient_ids.len() < 2 {
        return Err(Error::Invalid(format!(
            "{}: need at least 2 patients, got {}",
            label,
            patient_ids.len()
        )));
    }
    Ok(TaskScoreTable {
        patient_ids,
        task_names,
        rows,
    })
}
