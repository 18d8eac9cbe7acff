//! `lexbridge extract`: narration JSONL → feature matrix CSV (+ CFG
//! vocabulary JSON and an informational prune mask). In parallel mode the
//! input is a parallel JSONL corpus; dialogue windows are sampled first and
//! both sides are extracted.

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::output::{ensure_out_dir, write_json_with_sidecar, Provenance};
use crate::CliError;
use lexbridge::corpus::{load_lexicon, load_narrations, load_parallel, sample_windows, Narration};
use lexbridge::featx::{build_cfg_vocab, extract, prune_constant, CfgMode, CfgVocabulary};
use lexbridge::{FeatureMatrix, FeatureVector, FrequencyLexicon};

fn default_vocab_params(lang: &str) -> Result<(usize, CfgMode), CliError> {
    match lang {
        "en" => Ok((100, CfgMode::Ratio)),
        "zh" => Ok((60, CfgMode::Count)),
        other => Err(CliError::validation(format!(
            "unsupported language '{other}' (expected en or zh)"
        ))),
    }
}

fn extract_matrix(
    narrations: &[Narration],
    lexicon: &FrequencyLexicon,
    vocab: &CfgVocabulary,
) -> Result<FeatureMatrix, CliError> {
    let rows: Vec<Result<FeatureVector, lexbridge::Error>> = narrations
        .par_iter()
        .map(|n| extract(n, lexicon, vocab))
        .collect();
    let rows: Vec<FeatureVector> = rows.into_iter().collect::<Result<_, _>>()?;
    let ids = narrations.iter().map(|n| n.id.clone()).collect();
    Ok(FeatureMatrix::from_rows(ids, &rows)?)
}

fn build_vocab_for(
    narrations: &[Narration],
    lang: &str,
    cfg_top_k: usize,
) -> Result<CfgVocabulary, CliError> {
    let (default_k, mode) = default_vocab_params(lang)?;
    let top_k = if cfg_top_k == 0 { default_k } else { cfg_top_k };
    Ok(build_cfg_vocab(narrations, top_k, mode)?)
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let out = config.out_dir();
    ensure_out_dir(&out)?;
    let prov = Provenance {
        config_sha256: config.sha256(),
        seed: config.train.seed,
    };
    let comments = prov.comments();

    if config.data.parallel.is_some() {
        // parallel mode: sample windows, then extract both sides
        let path = super::require_path(&config.data.parallel, "parallel")?;
        let lexicon_src = load_lexicon(super::require_path(&config.data.lexicon_src, "lexicon_src")?)?;
        let lexicon_tgt = load_lexicon(super::require_path(&config.data.lexicon_tgt, "lexicon_tgt")?)?;
        let pairs = load_parallel(path)?;
        let windows = sample_windows(
            &pairs,
            config.sampling.n_samples,
            config.sampling.min_lines,
            config.sampling.max_lines,
            config.train.seed,
        )?;
        let sources: Vec<Narration> = windows.iter().map(|p| p.source.clone()).collect();
        let targets: Vec<Narration> = windows.iter().map(|p| p.target.clone()).collect();

        let vocab_src = build_vocab_for(&sources, &sources[0].lang, config.extract.cfg_top_k)?;
        let vocab_tgt = build_vocab_for(&targets, &targets[0].lang, config.extract.cfg_top_k)?;
        let src_matrix = extract_matrix(&sources, &lexicon_src, &vocab_src)?;
        let tgt_matrix = extract_matrix(&targets, &lexicon_tgt, &vocab_tgt)?;

        src_matrix.write_csv(&out.join("parallel_src.csv"), &comments)?;
        tgt_matrix.write_csv(&out.join("parallel_tgt.csv"), &comments)?;
        write_json_with_sidecar(&out.join("vocab_src.json"), &vocab_src, &prov)?;
        write_json_with_sidecar(&out.join("vocab_tgt.json"), &vocab_tgt, &prov)?;
        let (_, mask_src) = prune_constant(&src_matrix)?;
        let (_, mask_tgt) = prune_constant(&tgt_matrix)?;
        write_json_with_sidecar(&out.join("prune_mask_src.json"), &mask_src, &prov)?;
        write_json_with_sidecar(&out.join("prune_mask_tgt.json"), &mask_tgt, &prov)?;
        println!(
            "extract: {} windows -> {}x{} source and {}x{} target matrices",
            windows.len(),
            src_matrix.n_rows(),
            src_matrix.n_cols(),
            tgt_matrix.n_rows(),
            tgt_matrix.n_cols()
        );
        return Ok(());
    }

    // single-corpus mode
    let narr_path = super::require_path(&config.data.narrations, "narrations")?;
    let lang = config
        .data
        .lang
        .as_deref()
        .ok_or_else(|| CliError::validation("config is missing [data].lang"))?;
    let lexicon = load_lexicon(super::require_path(&config.data.lexicon, "lexicon")?)?;
    let narrations = load_narrations(narr_path, lang)?;
    if narrations.is_empty() {
        return Err(CliError::validation(format!(
            "{}: no narrations",
            narr_path.display()
        )));
    }
    let vocab = build_vocab_for(&narrations, lang, config.extract.cfg_top_k)?;
    let matrix = extract_matrix(&narrations, &lexicon, &vocab)?;
    matrix.write_csv(&out.join("features.csv"), &comments)?;
    write_json_with_sidecar(&out.join("cfg_vocab.json"), &vocab, &prov)?;
    let (_, mask) = prune_constant(&matrix)?;
    write_json_with_sidecar(&out.join("prune_mask.json"), &mask, &prov)?;
    println!(
        "extract: {} narrations -> {}x{} matrix ({} features pruned as near-constant)",
        narrations.len(),
        matrix.n_rows(),
        matrix.n_cols(),
        mask.dropped.len()
    );
    Ok(())
}
