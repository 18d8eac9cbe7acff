//! Output helpers: every artifact embeds the effective config hash and seed,
//! either as `#` header comments (CSV) or as a `.meta.json` sidecar (JSON,
//! whose schemas stay clean).

use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct Provenance {
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn comments(&self) -> Vec<String> {
        vec![
            format!("config_sha256={}", self.config_sha256),
            format!("seed={}", self.seed),
        ]
    }
}

pub fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::validation(format!("cannot create {}: {}", dir.display(), e)))
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {}", path.display(), e)))
}

/// Serialize `value` as pretty JSON and drop a provenance sidecar next to it.
pub fn write_json_with_sidecar<T: serde::Serialize>(
    path: &Path,
    value: &T,
    prov: &Provenance,
) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("serialize {}: {}", path.display(), e)))?;
    write_text(path, &json)?;
    let sidecar = sidecar_path(path);
    let meta = serde_json::json!({
        "config_sha256": prov.config_sha256,
        "seed": prov.seed,
    });
    write_text(&sidecar, &serde_json::to_string_pretty(&meta).unwrap())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}
