//! CLI acceptance: every command rerun with an identical config produces
//! byte-identical output files (criterion 7). Each command runs twice into
//! the same directory; the full output tree is snapshotted between runs and
//! compared byte for byte.

mod common;

use common::*;

fn assert_identical_reruns(label: &str, args: &[&str], dir: &std::path::Path, out_rel: &str) {
    let out_dir = dir.join(out_rel);
    let first = run_cmd(args, dir);
    assert_success(&first, label);
    let snap1 = snapshot(&out_dir);
    assert!(!snap1.is_empty(), "{label} wrote no files");
    let second = run_cmd(args, dir);
    assert_success(&second, label);
    let snap2 = snapshot(&out_dir);
    assert_eq!(
        snap1.keys().collect::<Vec<_>>(),
        snap2.keys().collect::<Vec<_>>(),
        "{label}: file set changed between runs"
    );
    for (path, bytes) in &snap1 {
        assert_eq!(
            bytes,
            &snap2[path],
            "{label}: {} differs between identical runs",
            path.display()
        );
    }
}

#[test]
fn criterion_7_cli_outputs_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_synth_config(dir.path(), "out");
    let cfg = config.to_str().unwrap();

    assert_identical_reruns("synth", &["--config", cfg, "synth"], dir.path(), "out");

    // extract over fixture corpora (both modes)
    let narrations = write_narrations_fixture(dir.path());
    let (_parallel, lex_zh, lex_en) = write_parallel_fixture(dir.path());
    let extract_cfg = format!(
        r#"
[io]
out_dir = "ex_out"

[data]
narrations = "{}"
lang = "en"
lexicon = "{}"
"#,
        narrations.file_name().unwrap().to_str().unwrap(),
        lex_en.file_name().unwrap().to_str().unwrap(),
    );
    std::fs::write(dir.path().join("extract.toml"), extract_cfg).unwrap();
    assert_identical_reruns(
        "extract",
        &["--config", "extract.toml", "extract"],
        dir.path(),
        "ex_out",
    );

    let par_cfg = format!(
        r#"
[io]
out_dir = "par_out"

[data]
parallel = "parallel.jsonl"
lexicon_src = "{}"
lexicon_tgt = "{}"

[sampling]
n_samples = 25
min_lines = 1
max_lines = 3
"#,
        lex_zh.file_name().unwrap().to_str().unwrap(),
        lex_en.file_name().unwrap().to_str().unwrap(),
    );
    std::fs::write(dir.path().join("extract_par.toml"), par_cfg).unwrap();
    assert_identical_reruns(
        "extract (parallel)",
        &["--config", "extract_par.toml", "extract"],
        dir.path(),
        "par_out",
    );

    // train / evaluate / ablate write into train_out so the synth inputs in
    // out/ stay untouched between reruns
    let full_cfg = std::fs::read_to_string(cfg).unwrap().replace(
        "out_dir = \"out\"",
        "out_dir = \"train_out\"",
    );
    let full_cfg = full_cfg.replace(
        "pipeline = \"out/pipeline.json\"",
        "pipeline = \"train_out/pipeline.json\"",
    );
    std::fs::write(dir.path().join("train.toml"), full_cfg).unwrap();

    assert_identical_reruns(
        "train",
        &["--config", "train.toml", "train"],
        dir.path(),
        "train_out",
    );

    // evaluate and ablate append to the same dir; snapshot catches them all
    assert_identical_reruns(
        "evaluate",
        &["--config", "train.toml", "evaluate"],
        dir.path(),
        "train_out",
    );
    assert_identical_reruns(
        "ablate",
        &["--config", "train.toml", "ablate"],
        dir.path(),
        "train_out",
    );

    println!("[PASS] criterion 7: synth/extract/train/evaluate/ablate outputs byte-identical across reruns");
}
