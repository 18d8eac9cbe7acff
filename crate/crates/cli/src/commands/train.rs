//! `lexbridge train`: correspondence training over aligned feature matrices,
//! then pipeline assembly per mode (plain, rrr, or jfs with a K-sweep).

use crate::config::{Mode, RunConfig};
use crate::output::{ensure_out_dir, write_text, Provenance};
use crate::CliError;
use lexbridge::bridge::{
    joint_feature_select_with_folds, save_pipeline, sweep_k_with_folds, train_correspondence,
    train_correspondence_rrr, CorrespondenceMode, CorrespondenceModel, PipelineParts,
};
use lexbridge::featx::prune_constant;
use lexbridge::CfgVocabulary;

fn load_optional_vocab(
    path: &Option<std::path::PathBuf>,
) -> Result<Option<CfgVocabulary>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let content = std::fs::read_to_string(p)
                .map_err(|e| CliError::validation(format!("cannot read {}: {}", p.display(), e)))?;
            let vocab: CfgVocabulary = serde_json::from_str(&content)
                .map_err(|e| CliError::validation(format!("{}: {}", p.display(), e)))?;
            Ok(Some(vocab))
        }
    }
}

fn r2_report_csv(corr: &CorrespondenceModel, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str("rank,feature,r2\n");
    for (i, (name, r2)) in corr.ranked_targets().iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i + 1, name, r2));
    }
    out
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let out = config.out_dir();
    ensure_out_dir(&out)?;
    let seed = config.train.seed;
    let prov = Provenance {
        config_sha256: config.sha256(),
        seed,
    };
    let comments = prov.comments();

    let src_raw = super::read_matrix(super::require_path(&config.data.parallel_src, "parallel_src")?)?;
    let tgt_raw = super::read_matrix(super::require_path(&config.data.parallel_tgt, "parallel_tgt")?)?;
    let db_raw = super::read_matrix(super::require_path(&config.data.db_features, "db_features")?)?;
    let db_y = super::labels_for_matrix(
        &db_raw,
        super::require_path(&config.data.db_labels, "db_labels")?,
    )?;

    let (src, source_prune) = prune_constant(&src_raw)?;
    let (tgt, target_prune) = prune_constant(&tgt_raw)?;
    let db = db_raw.select(&target_prune.kept).map_err(|e| {
        CliError::validation(format!(
            "labeled matrix does not cover the pruned target features: {e}"
        ))
    })?;

    let parts = PipelineParts {
        source_prune,
        target_prune,
        cfg_vocab_src: load_optional_vocab(&config.data.vocab_src)?,
        cfg_vocab_tgt: load_optional_vocab(&config.data.vocab_tgt)?,
    };

    let en_grid = config.elasticnet_grid();
    let c_grid = config.logistic_grid();
    if en_grid.is_empty() || c_grid.is_empty() {
        return Err(CliError::validation("empty hyperparameter grid in [train]"));
    }

    // optional evaluation data enables auto-K and the sweep's rho column
    let eval = match (&config.data.eval_src, &config.data.severities, &config.data.task_scores) {
        (Some(_), sev, task) if sev.is_some() || task.is_some() => {
            let eval_x = super::read_matrix(super::require_path(&config.data.eval_src, "eval_src")?)?;
            let scores = super::resolve_scores(config)?;
            let sev = super::severities_for_matrix(&eval_x, &scores)?;
            Some((eval_x, sev))
        }
        _ => None,
    };

    let mode = config.train.mode;
    let corr = match mode {
        Mode::Rrr => {
            if config.train.rank_grid.is_empty() {
                return Err(CliError::validation("empty [train].rank_grid"));
            }
            train_correspondence_rrr(
                &src,
                &tgt,
                &config.train.rank_grid,
                config.train.k_folds_correspondence,
                seed,
            )?
        }
        Mode::Plain | Mode::Jfs => train_correspondence(
            &src,
            &tgt,
            &en_grid,
            config.train.k_folds_correspondence,
            seed,
            config.train.tol,
            config.train.max_iter,
        )?,
    };

    write_text(&out.join("r2_report.csv"), &r2_report_csv(&corr, &comments))?;

    if let CorrespondenceMode::ReducedRank { selection, .. } = &corr.mode {
        let mut csv = String::new();
        for c in &comments {
            csv.push_str(&format!("# {c}\n"));
        }
        csv.push_str("rank,mean_cv_mse,selected\n");
        for (rank, mse) in &selection.scores {
            csv.push_str(&format!(
                "{},{},{}\n",
                rank,
                mse,
                if *rank == selection.selected_rank { 1 } else { 0 }
            ));
        }
        write_text(&out.join("rank_cv.csv"), &csv)?;
        println!("train: reduced-rank mode selected rank {}", selection.selected_rank);
    }

    let n_targets = corr.target_names.len();
    let folds = config.train.k_folds_classifier;
    let k = match mode {
        Mode::Jfs => {
            let curve = sweep_k_with_folds(
                &parts,
                &corr,
                &db,
                db_y.view(),
                eval.as_ref().map(|(x, s)| (x, s.as_slice())),
                seed,
                &c_grid,
                folds,
            )?;
            write_text(&out.join("ksweep.csv"), &curve.to_csv(&comments))?;
            if config.train.k != 0 {
                config.train.k
            } else if eval.is_some() {
                let (k, rho) = curve.best_k_by_spearman().ok_or_else(|| {
                    CliError::runtime("every K produced a degenerate ranking; cannot auto-select")
                })?;
                println!("train: auto-selected K = {k} (eval rho {rho:.3})");
                k
            } else {
                let (k, acc) = curve
                    .best_k_by_accuracy()
                    .ok_or_else(|| CliError::runtime("empty sweep"))?;
                println!("train: auto-selected K = {k} (classifier CV accuracy {acc:.3}; no eval data)");
                k
            }
        }
        Mode::Plain | Mode::Rrr => n_targets,
    };
    if k == 0 || k > n_targets {
        return Err(CliError::validation(format!(
            "[train].k = {k} out of range 1..={n_targets}"
        )));
    }

    let pipeline =
        joint_feature_select_with_folds(&parts, &corr, &db, db_y.view(), k, seed, &c_grid, folds)?;
    let pipeline_path = out.join("pipeline.json");
    save_pipeline(&pipeline, &pipeline_path)?;
    let meta = serde_json::json!({
        "config_sha256": prov.config_sha256,
        "seed": prov.seed,
        "mode": mode.to_string(),
        "k": k,
    });
    write_text(
        &crate::output::sidecar_path(&pipeline_path),
        &serde_json::to_string_pretty(&meta).unwrap(),
    )?;
    println!(
        "train: mode {mode}, {} source features -> {} targets, pipeline with k = {k} written to {}",
        corr.source_names.len(),
        n_targets,
        pipeline_path.display()
    );
    Ok(())
}
