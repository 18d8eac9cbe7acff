use super::correspondence::*;
use super::pipeline::*;
use super::sweep::*;
use crate::featx::matrix::{FeatureMatrix, FeatureVector};
use crate::featx::prune::PruneMask;
use crate::solvers::{default_logistic_grid, ElasticNetPoint};
use approx::assert_abs_diff_eq;
use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| {
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    })
}

fn named(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:03}")).collect()
}

fn fm(prefix: &str, data: Array2<f64>) -> FeatureMatrix {
    FeatureMatrix {
        ids: (0..data.nrows()).map(|i| format!("r{i}")).collect(),
        names: named(prefix, data.ncols()),
        data,
    }
}

fn small_grid() -> Vec<ElasticNetPoint> {
    vec![
        ElasticNetPoint { alpha: 1e-4, l1_ratio: 0.5 },
        ElasticNetPoint { alpha: 1.0, l1_ratio: 0.5 },
    ]
}

#[test]
fn identity_corpus_recovers_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = randn(&mut rng, 200, 5);
    let x_src = fm("s", x.clone());
    let mut y_tgt = fm("t", x);
    y_tgt.names = named("t", 5);
    let model =
        train_correspondence(&x_src, &y_tgt, &small_grid(), 3, 0, 1e-7, 2000).unwrap();
    for (_, r2) in model.train_r2s() {
        assert!(r2 > 0.99, "r2 = {r2}");
    }
    // held-out rows map back to themselves
    let x_new = randn(&mut rng, 20, 5);
    let mapped = model.map_matrix(&fm("s", x_new.clone())).unwrap();
    let max_err = (&mapped.data - &x_new)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(max_err < 0.05, "max abs error {max_err}");
}

#[test]
fn pure_noise_target_has_near_zero_r2() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = randn(&mut rng, 1000, 5);
    let mut y = x.clone();
    let noise = randn(&mut rng, 1000, 1);
    y.column_mut(4).assign(&noise.column(0));
    let model = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-7, 2000)
        .unwrap();
    let r2s = model.train_r2s();
    assert!(r2s[4].1 < 0.1, "noise r2 = {}", r2s[4].1);
    assert!(r2s[0].1 > 0.9);
}

#[test]
fn single_target_yields_one_entry() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = randn(&mut rng, 30, 3);
    let y = x.column(0).to_owned().insert_axis(ndarray::Axis(1));
    let model = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-7, 2000)
        .unwrap();
    match &model.mode {
        CorrespondenceMode::Independent { targets } => assert_eq!(targets.len(), 1),
        _ => panic!("wrong mode"),
    }
}

#[test]
fn constant_target_degrades_to_intercept_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = randn(&mut rng, 40, 3);
    let mut y = randn(&mut rng, 40, 2);
    y.column_mut(1).fill(7.5);
    let model = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-7, 2000)
        .unwrap();
    match &model.mode {
        CorrespondenceMode::Independent { targets } => {
            assert!(targets[1].degenerate);
            assert_eq!(targets[1].train_r2, 0.0);
            assert!(targets[1].model.weights.iter().all(|&w| w == 0.0));
            assert_abs_diff_eq!(targets[1].model.intercept, 7.5);
        }
        _ => panic!("wrong mode"),
    }
    // intercept-only target: output equals the intercept regardless of input
    let a = model
        .map_vector(&FeatureVector::new(named("s", 3), vec![0.0, 0.0, 0.0]).unwrap())
        .unwrap();
    let b = model
        .map_vector(&FeatureVector::new(named("s", 3), vec![5.0, -3.0, 9.0]).unwrap())
        .unwrap();
    assert_eq!(a.get("t001").unwrap(), 7.5);
    assert_eq!(b.get("t001").unwrap(), 7.5);
}

#[test]
fn map_vector_is_affine() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = randn(&mut rng, 50, 4);
    let w = randn(&mut rng, 4, 3);
    let y = x.dot(&w);
    let model = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-8, 5000)
        .unwrap();
    let names = named("s", 4);
    let x1: Vec<f64> = vec![0.3, -1.2, 0.8, 0.1];
    let x2: Vec<f64> = vec![-0.5, 0.4, 1.5, -0.9];
    let a = 0.3;
    let blend: Vec<f64> = x1
        .iter()
        .zip(x2.iter())
        .map(|(u, v)| a * u + (1.0 - a) * v)
        .collect();
    let m1 = model
        .map_vector(&FeatureVector::new(names.clone(), x1).unwrap())
        .unwrap();
    let m2 = model
        .map_vector(&FeatureVector::new(names.clone(), x2).unwrap())
        .unwrap();
    let mb = model
        .map_vector(&FeatureVector::new(names, blend).unwrap())
        .unwrap();
    for j in 0..3 {
        let expect = a * m1.values[j] + (1.0 - a) * m2.values[j];
        assert_abs_diff_eq!(mb.values[j], expect, epsilon = 1e-10);
    }
}

#[test]
fn map_rejects_name_mismatch() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x = randn(&mut rng, 30, 2);
    let y = randn(&mut rng, 30, 2);
    let model = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-6, 500)
        .unwrap();
    let bad = FeatureVector::new(vec!["wrong".into(), "s001".into()], vec![1.0, 2.0]).unwrap();
    let err = model.map_vector(&bad).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("s000") && msg.contains("wrong"), "{msg}");
}

#[test]
fn map_accepts_reordered_names() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = randn(&mut rng, 30, 2);
    let y = x.clone();
    let model = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-8, 5000)
        .unwrap();
    let fwd = FeatureVector::new(named("s", 2), vec![1.0, 2.0]).unwrap();
    let rev = FeatureVector::new(vec!["s001".into(), "s000".into()], vec![2.0, 1.0]).unwrap();
    let a = model.map_vector(&fwd).unwrap();
    let b = model.map_vector(&rev).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rrr_full_rank_matches_independent_least_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = randn(&mut rng, 150, 5);
    let w = randn(&mut rng, 5, 4);
    let y = x.dot(&w) + &(randn(&mut rng, 150, 4) * 0.02);
    let x_src = fm("s", x.clone());
    let y_tgt = fm("t", y);
    let indep = train_correspondence(
        &x_src,
        &y_tgt,
        &[ElasticNetPoint { alpha: 1e-7, l1_ratio: 0.0 }],
        3,
        0,
        1e-10,
        50_000,
    )
    .unwrap();
    let rrr = train_correspondence_rrr(&x_src, &y_tgt, &[4], 3, 0).unwrap();
    let probe = fm("s", randn(&mut rng, 10, 5));
    let a = indep.map_matrix(&probe).unwrap();
    let b = rrr.map_matrix(&probe).unwrap();
    let max_err = (&a.data - &b.data).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(max_err < 1e-4, "max err {max_err}");
}

#[test]
fn rrr_cv_selects_true_rank_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = randn(&mut rng, 120, 6);
    let u = randn(&mut rng, 6, 1);
    let v = randn(&mut rng, 1, 5);
    let y = x.dot(&u.dot(&v)) + &(randn(&mut rng, 120, 5) * 0.05);
    let model = train_correspondence_rrr(&fm("s", x), &fm("t", y), &[1, 2, 4], 3, 0).unwrap();
    match &model.mode {
        CorrespondenceMode::ReducedRank { selection, .. } => {
            assert_eq!(selection.selected_rank, 1, "scores {:?}", selection.scores);
        }
        _ => panic!("wrong mode"),
    }
}

#[test]
fn rrr_rank_one_underfits_rank_three_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let x = randn(&mut rng, 100, 6);
    let w = randn(&mut rng, 6, 3).dot(&randn(&mut rng, 3, 5));
    let y = x.dot(&w);
    let x_src = fm("s", x.clone());
    let y_tgt = fm("t", y.clone());
    let m1 = train_correspondence_rrr(&x_src, &y_tgt, &[1], 2, 0).unwrap();
    let m3 = train_correspondence_rrr(&x_src, &y_tgt, &[3], 2, 0).unwrap();
    let mse = |m: &CorrespondenceModel| {
        let pred = m.map_matrix(&x_src).unwrap();
        (&pred.data - &y).mapv(|e| e * e).mean().unwrap()
    };
    assert!(mse(&m1) > mse(&m3));
}

fn toy_pipeline_inputs() -> (CorrespondenceModel, FeatureMatrix, Array1<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = randn(&mut rng, 300, 4);
    // two informative targets, one weak
    let mut w = Array2::<f64>::zeros((4, 3));
    w[[0, 0]] = 1.0;
    w[[1, 1]] = 1.0;
    w[[2, 2]] = 0.05;
    let y = x.dot(&w) + &(randn(&mut rng, 300, 3) * 0.05);
    let corr = train_correspondence(&fm("s", x), &fm("t", y), &small_grid(), 3, 0, 1e-7, 2000)
        .unwrap();
    let db_x_data = randn(&mut rng, 120, 3);
    let score = db_x_data.column(0).to_owned() + db_x_data.column(1);
    let labels: Array1<f64> = score.mapv(|v| if v > 0.0 { 1.0 } else { 0.0 });
    let db_x = fm("t", db_x_data);
    (corr, db_x, labels)
}

#[test]
fn selection_takes_top_k_by_r2_with_prefix_property() {
    let (corr, db_x, labels) = toy_pipeline_inputs();
    let parts = PipelineParts {
        source_prune: PruneMask::identity(&corr.source_names),
        target_prune: PruneMask::identity(&corr.target_names),
        cfg_vocab_src: None,
        cfg_vocab_tgt: None,
    };
    let ranked = corr.ranked_targets();
    assert!(ranked[0].1 >= ranked[1].1 && ranked[1].1 >= ranked[2].1);

    let grid = default_logistic_grid();
    let p1 = joint_feature_select(&parts, &corr, &db_x, labels.view(), 1, 7, &grid).unwrap();
    let p2 = joint_feature_select(&parts, &corr, &db_x, labels.view(), 2, 7, &grid).unwrap();
    let p3 = joint_feature_select(&parts, &corr, &db_x, labels.view(), 3, 7, &grid).unwrap();
    assert_eq!(p1.selected_targets.len(), 1);
    assert_eq!(p1.classifier.weights.len(), 1);
    assert_eq!(p1.selected_targets[0], ranked[0].0);
    // prefix property
    assert_eq!(p2.selected_targets[..1], p1.selected_targets[..]);
    assert_eq!(p3.selected_targets[..2], p2.selected_targets[..]);

    assert!(joint_feature_select(&parts, &corr, &db_x, labels.view(), 0, 7, &grid).is_err());
    assert!(joint_feature_select(&parts, &corr, &db_x, labels.view(), 4, 7, &grid).is_err());
}

#[test]
fn pipeline_round_trip_preserves_predictions_bitwise() {
    let (corr, db_x, labels) = toy_pipeline_inputs();
    let parts = PipelineParts {
        source_prune: PruneMask::identity(&corr.source_names),
        target_prune: PruneMask::identity(&corr.target_names),
        cfg_vocab_src: None,
        cfg_vocab_tgt: None,
    };
    let pipeline =
        joint_feature_select(&parts, &corr, &db_x, labels.view(), 2, 7, &default_logistic_grid())
            .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pipeline.json");
    save_pipeline(&pipeline, &path).unwrap();
    let loaded = load_pipeline(&path).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let v = FeatureVector::new(named("s", 4), x).unwrap();
        let (pa, ma) = pipeline.predict_vector(&v).unwrap();
        let (pb, mb) = loaded.predict_vector(&v).unwrap();
        assert_eq!(pa.to_bits(), pb.to_bits());
        assert_eq!(ma.values, mb.values);
    }
}

#[test]
fn pipeline_load_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let trunc = dir.path().join("trunc.json");
    std::fs::write(&trunc, "{\"format_version\": 1, \"source_pr").unwrap();
    assert!(load_pipeline(&trunc).is_err());

    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, "{\"format_version\": 99}").unwrap();
    let err = load_pipeline(&wrong).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("99") && msg.contains('1'), "{msg}");
}

#[test]
fn zero_weight_classifier_gives_constant_probability() {
    let (corr, db_x, labels) = toy_pipeline_inputs();
    let parts = PipelineParts {
        source_prune: PruneMask::identity(&corr.source_names),
        target_prune: PruneMask::identity(&corr.target_names),
        cfg_vocab_src: None,
        cfg_vocab_tgt: None,
    };
    let mut pipeline =
        joint_feature_select(&parts, &corr, &db_x, labels.view(), 2, 7, &default_logistic_grid())
            .unwrap();
    for w in pipeline.classifier.weights.iter_mut() {
        *w = 0.0;
    }
    pipeline.classifier.intercept = 0.3;
    let a = pipeline
        .predict_vector(&FeatureVector::new(named("s", 4), vec![1.0, 2.0, 3.0, 4.0]).unwrap())
        .unwrap();
    let b = pipeline
        .predict_vector(&FeatureVector::new(named("s", 4), vec![-1.0, 0.0, 0.5, 9.0]).unwrap())
        .unwrap();
    assert_eq!(a.0, b.0);
    let expected = 1.0 / (1.0 + (-0.3f64).exp());
    assert_abs_diff_eq!(a.0, expected, epsilon = 1e-12);
}

#[test]
fn predictions_invariant_to_target_training_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let x = randn(&mut rng, 120, 4);
    let w = randn(&mut rng, 4, 3);
    let y = x.dot(&w) + &(randn(&mut rng, 120, 3) * 0.05);
    let x_src = fm("s", x);
    let y_fwd = fm("t", y.clone());
    // same targets, columns permuted
    let perm = [2usize, 0, 1];
    let mut y_perm_data = Array2::<f64>::zeros((120, 3));
    for (new_j, &old_j) in perm.iter().enumerate() {
        y_perm_data.column_mut(new_j).assign(&y.column(old_j));
    }
    let y_perm = FeatureMatrix {
        ids: y_fwd.ids.clone(),
        names: perm.iter().map(|&j| y_fwd.names[j].clone()).collect(),
        data: y_perm_data,
    };
    let a = train_correspondence(&x_src, &y_fwd, &small_grid(), 3, 9, 1e-8, 3000).unwrap();
    let b = train_correspondence(&x_src, &y_perm, &small_grid(), 3, 9, 1e-8, 3000).unwrap();
    let probe = FeatureVector::new(named("s", 4), vec![0.4, -0.2, 1.1, 0.7]).unwrap();
    let ma = a.map_vector(&probe).unwrap();
    let mb = b.map_vector(&probe).unwrap();
    for name in &y_fwd.names {
        assert_eq!(
            ma.get(name).unwrap().to_bits(),
            mb.get(name).unwrap().to_bits(),
            "prediction for {name} depends on training order"
        );
    }
}

mod predict_narrations {
    use super::*;
    use crate::bridge::{predict_dementia, CorrespondenceMode, PipelineModel};
    use crate::corpus::{FrequencyLexicon, Narration, Sentence};
    use crate::eval::{evaluate_pipeline, DementiaScores};
    use crate::featx::{CfgMode, CfgVocabulary};
    use crate::solvers::{CvMetric, CvReport, LinearModel, LogisticModel, LogisticPoint};

    fn zh_narration(id: &str, n_sentences: usize) -> Narration {
        let parse = "(S (NP (PN 他)) (VP (VV 跑)))";
        let tree = crate::featx::parse_bracketed(parse).unwrap();
        let tokens: Vec<(String, String)> = tree
            .preterminals()
            .iter()
            .map(|(tag, tok)| (tok.to_string(), tag.to_string()))
            .collect();
        Narration {
            id: id.into(),
            lang: "zh".into(),
            sentences: (0..n_sentences)
                .map(|_| Sentence {
                    tokens: tokens.clone(),
                    parse: parse.to_string(),
                })
                .collect(),
        }
    }

    /// Pipeline whose single target is a copy of the narration's sentence
    /// count, with a configurable classifier.
    fn linguistic_pipeline(weights: Vec<f64>, intercept: f64) -> PipelineModel {
        let vocab = CfgVocabulary {
            mode: CfgMode::Count,
            productions: vec![],
        };
        let lexicon = FrequencyLexicon::new(vec![], 0.0).unwrap();
        let probe = crate::featx::extract_mandarin(&zh_narration("probe", 1), &lexicon, &vocab)
            .unwrap();
        let source_names = probe.names.clone();
        let sc_index = source_names
            .iter()
            .position(|n| n == "sentence_count")
            .unwrap();
        let mut w = vec![0.0; source_names.len()];
        w[sc_index] = 1.0;
        let correspondence = crate::bridge::CorrespondenceModel {
            source_names: source_names.clone(),
            target_names: vec!["t0".into()],
            mode: CorrespondenceMode::Independent {
                targets: vec![crate::bridge::TargetRegression {
                    name: "t0".into(),
                    model: LinearModel {
                        weights: w,
                        intercept: 0.0,
                        alpha: 0.0,
                        l1_ratio: 0.0,
                        converged: true,
                    },
                    train_r2: 1.0,
                    cv: None,
                    degenerate: false,
                }],
            },
        };
        PipelineModel {
            format_version: crate::bridge::PIPELINE_FORMAT_VERSION,
            source_prune: PruneMask::identity(&source_names),
            target_prune: PruneMask::identity(&["t0".into()]),
            cfg_vocab_src: Some(vocab),
            cfg_vocab_tgt: None,
            correspondence,
            selected_targets: vec!["t0".into()],
            classifier: LogisticModel {
                weights,
                intercept,
                c_inv_reg: 1.0,
                converged: true,
            },
            classifier_cv: CvReport {
                points: vec![LogisticPoint { c_inv_reg: 1.0 }],
                mean_scores: vec![1.0],
                best_index: 0,
                metric: CvMetric::Accuracy,
                k_folds: 5,
                seed: 0,
            },
            k: 1,
        }
    }

    #[test]
    fn zero_weight_classifier_is_constant_and_pure() {
        let pipeline = linguistic_pipeline(vec![0.0], 0.3);
        let lexicon = FrequencyLexicon::new(vec![], 0.0).unwrap();
        let (p1, m1) = predict_dementia(&pipeline, &zh_narration("a", 1), &lexicon).unwrap();
        let (p2, _) = predict_dementia(&pipeline, &zh_narration("b", 5), &lexicon).unwrap();
        let expected = 1.0 / (1.0 + (-0.3f64).exp());
        assert!((p1 - expected).abs() < 1e-12);
        assert_eq!(p1, p2);
        // identical source features -> identical outputs, bitwise
        let (p3, m3) = predict_dementia(&pipeline, &zh_narration("c", 1), &lexicon).unwrap();
        assert_eq!(p1.to_bits(), p3.to_bits());
        assert_eq!(m1.values, m3.values);
    }

    #[test]
    fn evaluate_pipeline_tracks_planted_ordering() {
        let pipeline = linguistic_pipeline(vec![1.0], 0.0);
        let lexicon = FrequencyLexicon::new(vec![], 0.0).unwrap();
        let narrations = vec![
            zh_narration("p1", 1),
            zh_narration("p2", 2),
            zh_narration("p3", 3),
        ];
        let rising = DementiaScores::from_pairs(
            vec![("p1".into(), 0.1), ("p2".into(), 0.5), ("p3".into(), 0.9)],
            "test",
        );
        let rho = evaluate_pipeline(&pipeline, &narrations, &lexicon, &rising).unwrap();
        assert_eq!(rho, 1.0);
        let falling = DementiaScores::from_pairs(
            vec![("p1".into(), 0.9), ("p2".into(), 0.5), ("p3".into(), 0.1)],
            "test",
        );
        let rho = evaluate_pipeline(&pipeline, &narrations, &lexicon, &falling).unwrap();
        assert_eq!(rho, -1.0);
        let missing = DementiaScores::from_pairs(
            vec![("p1".into(), 0.9), ("p2".into(), 0.5)],
            "test",
        );
        let err = evaluate_pipeline(&pipeline, &narrations, &lexicon, &missing).unwrap_err();
        assert!(err.to_string().contains("p3"), "{err}");
    }
}

#[test]
fn sweep_covers_every_k_and_full_k_matches_no_selection() {
    let (corr, db_x, labels) = toy_pipeline_inputs();
    let parts = PipelineParts {
        source_prune: PruneMask::identity(&corr.source_names),
        target_prune: PruneMask::identity(&corr.target_names),
        cfg_vocab_src: None,
        cfg_vocab_tgt: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let eval_x = fm("s", randn(&mut rng, 25, 4));
    let sev: Vec<f64> = eval_x.data.column(0).iter().map(|v| 2.0 * v + 0.3).collect();

    let grid = default_logistic_grid();
    let curve = sweep_k(
        &parts,
        &corr,
        &db_x,
        labels.view(),
        Some((&eval_x, &sev)),
        7,
        &grid,
    )
    .unwrap();
    assert_eq!(curve.rows.len(), 3);
    for row in &curve.rows {
        assert!(row.db_cv_accuracy >= 0.0 && row.db_cv_accuracy <= 1.0);
    }

    // K = |targets| equals the no-selection pipeline exactly
    let full =
        joint_feature_select(&parts, &corr, &db_x, labels.view(), 3, 7, &grid).unwrap();
    let probs = full.predict_matrix(&eval_x).unwrap().0;
    let rho_full = crate::eval::spearman_rho(
        probs.as_slice().unwrap(),
        &sev,
    )
    .unwrap();
    assert_abs_diff_eq!(curve.rows[2].spearman.unwrap(), rho_full, epsilon = 1e-12);
}
