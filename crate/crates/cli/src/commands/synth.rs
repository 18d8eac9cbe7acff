//! `lexbridge synth`: materialize a synthetic benchmark in the corpus file
//! formats so the rest of the pipeline can run without gated data.

use crate::config::RunConfig;
use crate::output::{ensure_out_dir, write_json_with_sidecar, write_text, Provenance};
use crate::CliError;
use lexbridge::eval::generate_synthetic_benchmark;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let seed = config.train.seed;
    let bench = generate_synthetic_benchmark(&config.synth.to_config(), seed)?;
    let out = config.out_dir();
    ensure_out_dir(&out)?;
    let prov = Provenance {
        config_sha256: config.sha256(),
        seed,
    };
    let comments = prov.comments();

    bench
        .parallel_src
        .write_csv(&out.join("parallel_src.csv"), &comments)?;
    bench
        .parallel_tgt
        .write_csv(&out.join("parallel_tgt.csv"), &comments)?;
    bench.db.write_csv(&out.join("db_features.csv"), &comments)?;
    bench
        .eval_src
        .write_csv(&out.join("eval_src.csv"), &comments)?;

    let mut labels = String::new();
    for c in &comments {
        labels.push_str(&format!("# {c}\n"));
    }
    labels.push_str("narration_id,label\n");
    for (id, &is_dementia) in bench.db.ids.iter().zip(bench.db_labels.iter()) {
        labels.push_str(&format!(
            "{},{}\n",
            id,
            if is_dementia { "dementia" } else { "control" }
        ));
    }
    write_text(&out.join("db_labels.csv"), &labels)?;

    let mut severities = String::new();
    for c in &comments {
        severities.push_str(&format!("# {c}\n"));
    }
    severities.push_str("patient_id,severity\n");
    for (id, sev) in bench.eval_src.ids.iter().zip(bench.severities.iter()) {
        severities.push_str(&format!("{},{}\n", id, sev));
    }
    write_text(&out.join("severities.csv"), &severities)?;

    let truth = serde_json::json!({
        "clean_targets": bench.clean_targets,
        "config": bench.config,
        "seed": bench.seed,
    });
    write_json_with_sidecar(&out.join("truth.json"), &truth, &prov)?;

    println!(
        "synth: wrote {} parallel rows, {} labeled rows, {} eval rows to {}",
        bench.parallel_src.n_rows(),
        bench.db.n_rows(),
        bench.eval_src.n_rows(),
        out.display()
    );
    Ok(())
}
