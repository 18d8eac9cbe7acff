//! `lexbridge evaluate`: score the unilingual baseline, the optional
//! translate baseline, and the trained pipeline against severity ground
//! truth; one CSV row per model.

use crate::config::RunConfig;
use crate::output::{ensure_out_dir, write_text, Provenance};
use crate::CliError;
use lexbridge::bridge::load_pipeline;
use lexbridge::corpus::{load_lexicon, load_narrations};
use lexbridge::eval::{
    evaluate_pipeline, evaluate_pipeline_matrix, translate_baseline, unilingual_baseline,
};
use lexbridge::FeatureMatrix;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let out = config.out_dir();
    ensure_out_dir(&out)?;
    let seed = config.train.seed;
    let prov = Provenance {
        config_sha256: config.sha256(),
        seed,
    };

    let pipeline = load_pipeline(super::require_path(&config.data.pipeline, "pipeline")?)?;
    let scores = super::resolve_scores(config)?;

    let mut rows: Vec<(String, f64)> = Vec::new();

    // evaluation data: feature-matrix mode or narration mode
    let narration_mode = config.data.eval_narrations.is_some();
    let (eval_matrix, severities, pipeline_rho) = if narration_mode {
        let narr_path = super::require_path(&config.data.eval_narrations, "eval_narrations")?;
        let lexicon = load_lexicon(super::require_path(&config.data.eval_lexicon, "eval_lexicon")?)?;
        let narrations = load_narrations(narr_path, "zh")?;
        let rho = evaluate_pipeline(&pipeline, &narrations, &lexicon, &scores)?;
        // unilingual baseline needs the extracted source matrix
        let vocab = pipeline.cfg_vocab_src.as_ref().ok_or_else(|| {
            CliError::validation("pipeline has no source CFG vocabulary for narration-mode evaluation")
        })?;
        let rows_fv: Vec<lexbridge::FeatureVector> = narrations
            .iter()
            .map(|n| lexbridge::featx::extract_mandarin(n, &lexicon, vocab))
            .collect::<Result<_, _>>()?;
        let ids: Vec<String> = narrations.iter().map(|n| n.id.clone()).collect();
        let matrix = FeatureMatrix::from_rows(ids, &rows_fv)?;
        let sev = super::severities_for_matrix(&matrix, &scores)?;
        (matrix, sev, rho)
    } else {
        let eval_x = super::read_matrix(super::require_path(&config.data.eval_src, "eval_src")?)?;
        let sev = super::severities_for_matrix(&eval_x, &scores)?;
        let rho = evaluate_pipeline_matrix(&pipeline, &eval_x, &sev)?;
        (eval_x, sev, rho)
    };

    let uni = unilingual_baseline(&eval_matrix, &severities, 5, seed)?;
    rows.push(("unilingual".into(), uni));

    match (&config.data.translated, &config.data.translated_lexicon) {
        (Some(_), _) => {
            let t_path = super::require_path(&config.data.translated, "translated")?;
            let t_lex = load_lexicon(super::require_path(
                &config.data.translated_lexicon,
                "translated_lexicon",
            )?)?;
            let translated = load_narrations(t_path, "en")?;
            let rho = translate_baseline(&pipeline, &translated, &t_lex, &scores)?;
            rows.push(("translate".into(), rho));
        }
        (None, _) => {
            eprintln!("notice: no [data].translated input; translate baseline omitted");
        }
    }

    rows.push(("pipeline".into(), pipeline_rho));

    let mut csv = String::new();
    for c in prov.comments() {
        csv.push_str(&format!("# {c}\n"));
    }
    csv.push_str("model,spearman\n");
    for (model, rho) in &rows {
        csv.push_str(&format!("{},{}\n", model, rho));
    }
    write_text(&out.join("results.csv"), &csv)?;

    for (model, rho) in &rows {
        println!("evaluate: {model} rho = {rho:.4} (|rho| = {:.4})", rho.abs());
    }
    Ok(())
}
