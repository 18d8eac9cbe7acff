//! Shared helpers for CLI integration tests: run the binary, build tiny
//! fixture corpora, snapshot output trees.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_lexbridge")
}

pub fn run_cmd(args: &[&str], cwd: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

pub fn assert_success(out: &Output, what: &str) {
    assert!(
        out.status.success(),
        "{what} failed with status {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// All regular files under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let entry = entry.unwrap();
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn en_sentences() -> Vec<(&'static str, &'static str)> {
    // (parse, unused marker); tokens derive from the parse
    vec![
        ("(S (NP (DT the) (NN dog)) (VP (VBD saw) (NP (DT the) (NN cat))))", ""),
        ("(S (NP (PRP he)) (VP (VBD ran) (ADVP (RB quickly))))", ""),
        ("(S (NP (DT a) (JJ small) (NN bird)) (VP (VBD sang)))", ""),
        ("(S (NP (PRP she)) (VP (VBD left) (SBAR (IN because) (S (NP (PRP he)) (VP (VBD stayed))))))", ""),
        ("(S (NP (NNS children)) (VP (VBP play) (PP (IN in) (NP (DT the) (NN park)))))", ""),
        ("(S (NP (DT the) (NN cook)) (VP (VBZ washes) (NP (NNS dishes))))", ""),
    ]
}

fn zh_sentences() -> Vec<&'static str> {
    vec![
        "(S (NP (PN 他)) (VP (VV 跑)))",
        "(S (NP (PN 你)) (VP (VV 看) (NP (NN 書))))",
        "(S (NP (NR 小明)) (VP (VV 吃) (NP (NN 飯))))",
        "(S (NP (DT 這) (NN 狗)) (VP (VV 叫)))",
        "(S (NP (PN 我)) (VP (AD 常常) (VV 走)))",
        "(S (NP (NN 孩子)) (VP (VV 玩) (NP (NN 球))))",
    ]
}

fn sentence_json(parse: &str) -> String {
    // reparse to recover (surface, tag) pairs so fixtures are always valid
    let mut tokens = Vec::new();
    let mut chars = parse.chars().peekable();
    let mut stack: Vec<String> = Vec::new();
    let mut atom = String::new();
    let mut last_label: Option<String> = None;
    while let Some(c) = chars.next() {
        match c {
            '(' => {
                atom.clear();
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' {
                        break;
                    }
                    atom.push(chars.next().unwrap());
                }
                stack.push(atom.clone());
                last_label = Some(atom.clone());
            }
            ')' => {
                stack.pop();
            }
            c if c.is_whitespace() => {}
            c => {
                let mut tok = String::new();
                tok.push(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' {
                        break;
                    }
                    tok.push(chars.next().unwrap());
                }
                tokens.push((tok, last_label.clone().unwrap()));
            }
        }
    }
    let toks: Vec<String> = tokens
        .iter()
        .map(|(s, t)| format!("[\"{}\",\"{}\"]", s, t))
        .collect();
    format!(
        "{{\"tokens\":[{}],\"parse\":\"{}\"}}",
        toks.join(","),
        parse.replace('"', "\\\"")
    )
}

fn narration_json(id: &str, lang: &str, parses: &[&str]) -> String {
    let sents: Vec<String> = parses.iter().map(|p| sentence_json(p)).collect();
    format!(
        "{{\"id\":\"{}\",\"lang\":\"{}\",\"sentences\":[{}]}}",
        id,
        lang,
        sents.join(",")
    )
}

/// A tiny parallel zh/en JSONL corpus plus lexicon TSVs.
pub fn write_parallel_fixture(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let en = en_sentences();
    let zh = zh_sentences();
    let mut lines = Vec::new();
    for i in 0..12usize {
        let zh_parse = zh[i % zh.len()];
        let en_parse = en[i % en.len()].0;
        let line = format!(
            "{{\"pair_id\":\"p{i:03}\",\"source\":{},\"target\":{}}}",
            narration_json(&format!("p{i:03}.zh"), "zh", &[zh_parse]),
            narration_json(&format!("p{i:03}.en"), "en", &[en_parse]),
        );
        lines.push(line);
    }
    let parallel = dir.join("parallel.jsonl");
    std::fs::write(&parallel, lines.join("\n") + "\n").unwrap();

    let lex_zh = dir.join("lexicon_zh.tsv");
    std::fs::write(&lex_zh, "#default 3.5\n他\t6.3\n你\t6.5\n跑\t4.2\n看\t5.9\n").unwrap();
    let lex_en = dir.join("lexicon_en.tsv");
    std::fs::write(
        &lex_en,
        "#default 3.0\nthe\t7.1\ndog\t4.9\ncat\t4.8\nhe\t6.6\nshe\t6.4\n",
    )
    .unwrap();
    (parallel, lex_zh, lex_en)
}

/// English-only narrations JSONL for single-corpus extraction.
pub fn write_narrations_fixture(dir: &Path) -> PathBuf {
    let en = en_sentences();
    let mut lines = Vec::new();
    for i in 0..5usize {
        let parses: Vec<&str> = (0..=i).map(|j| en[(i + j) % en.len()].0).collect();
        lines.push(narration_json(&format!("n{i:02}"), "en", &parses));
    }
    let path = dir.join("narrations.jsonl");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

/// Evaluation-side fixtures for the linguistic path: 10 zh patients with
/// 1..=10 sentences, matching translated English narrations, and a
/// severities CSV tied to narration length.
pub fn write_eval_fixture(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let zh = zh_sentences();
    let en = en_sentences();
    let mut zh_lines = Vec::new();
    let mut en_lines = Vec::new();
    let mut sev = String::from("patient_id,severity\n");
    for i in 1..=10usize {
        let id = format!("e{i:02}");
        let zh_parses: Vec<&str> = (0..i).map(|j| zh[(i + j) % zh.len()]).collect();
        let en_parses: Vec<&str> = (0..i).map(|j| en[(i + j) % en.len()].0).collect();
        zh_lines.push(narration_json(&id, "zh", &zh_parses));
        en_lines.push(narration_json(&id, "en", &en_parses));
        sev.push_str(&format!("{},{}\n", id, 0.1 * i as f64));
    }
    let zh_path = dir.join("eval_zh.jsonl");
    std::fs::write(&zh_path, zh_lines.join("\n") + "\n").unwrap();
    let en_path = dir.join("translated_en.jsonl");
    std::fs::write(&en_path, en_lines.join("\n") + "\n").unwrap();
    let sev_path = dir.join("eval_severities.csv");
    std::fs::write(&sev_path, sev).unwrap();
    (zh_path, en_path, sev_path)
}

/// Config for a small synthetic run (fast but non-trivial).
pub fn write_synth_config(dir: &Path, out_rel: &str) -> PathBuf {
    let config = format!(
        r#"
[io]
out_dir = "{out_rel}"

[data]
parallel_src = "{out_rel}/parallel_src.csv"
parallel_tgt = "{out_rel}/parallel_tgt.csv"
db_features = "{out_rel}/db_features.csv"
db_labels = "{out_rel}/db_labels.csv"
eval_src = "{out_rel}/eval_src.csv"
severities = "{out_rel}/severities.csv"
pipeline = "{out_rel}/pipeline.json"

[train]
seed = 7
mode = "jfs"
alpha_grid = [0.001, 1.0]
l1_ratio_grid = [0.5, 1.0]
c_inv_grid = [1.0, 10.0]
rank_grid = [1, 2, 6]
tol = 1e-5
max_iter = 500

[ablate]
sizes = [10, 60]
reps = 2

[synth]
n_parallel = 250
src_dim = 8
tgt_dim = 6
true_rank = 2
noise_sigma = 0.1
noise_fraction = 0.5
n_eval = 20
n_labeled = 120
"#
    );
    let path = dir.join("config.toml");
    std::fs::write(&path, config).unwrap();
    path
}
