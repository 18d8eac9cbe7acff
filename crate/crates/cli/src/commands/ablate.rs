//! `lexbridge ablate`: end-to-end retraining over a grid of parallel sample
//! sizes, 10 repetitions each by default, with per-size mean and 2σ summary.

use crate::config::RunConfig;
use crate::output::{ensure_out_dir, write_text, Provenance};
use crate::CliError;
use lexbridge::eval::{ablate_sample_size, AblationInputs, AblationParams, EndToEndConfig};

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let out = config.out_dir();
    ensure_out_dir(&out)?;
    let seed = config.train.seed;
    let prov = Provenance {
        config_sha256: config.sha256(),
        seed,
    };

    let src = super::read_matrix(super::require_path(&config.data.parallel_src, "parallel_src")?)?;
    let tgt = super::read_matrix(super::require_path(&config.data.parallel_tgt, "parallel_tgt")?)?;
    let db = super::read_matrix(super::require_path(&config.data.db_features, "db_features")?)?;
    let db_y = super::labels_for_matrix(
        &db,
        super::require_path(&config.data.db_labels, "db_labels")?,
    )?;
    let eval_x = super::read_matrix(super::require_path(&config.data.eval_src, "eval_src")?)?;
    let scores = super::resolve_scores(config)?;
    let severities = super::severities_for_matrix(&eval_x, &scores)?;

    let inputs = AblationInputs {
        x_src: &src,
        y_tgt: &tgt,
        db_x: &db,
        db_y: db_y.view(),
        eval_x: &eval_x,
        severities: &severities,
    };
    let params = AblationParams {
        sizes: config.ablate.sizes.clone(),
        reps: config.ablate.reps,
        base_seed: seed,
        run: EndToEndConfig {
            en_grid: config.elasticnet_grid(),
            c_grid: config.logistic_grid(),
            k_folds_correspondence: config.train.k_folds_correspondence,
            k_folds_classifier: config.train.k_folds_classifier,
            tol: config.train.tol,
            max_iter: config.train.max_iter,
        },
    };
    let result = ablate_sample_size(&inputs, &params)?;

    let comments = prov.comments();
    write_text(&out.join("ablation.csv"), &result.detail_csv(&comments))?;
    write_text(
        &out.join("ablation_summary.csv"),
        &result.summary_csv(&comments),
    )?;

    for s in &result.summary {
        println!(
            "ablate: size {} -> mean rho {:.4} (2 std {:.4})",
            s.size,
            s.mean,
            2.0 * s.std
        );
    }
    Ok(())
}
