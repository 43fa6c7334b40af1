use std::fs;
use std::path::Path;

use laea_harness::config::ExperimentConfig;
use laea_harness::fixtures::{validate_dir, FixtureStatus};
use laea_harness::{rebuild_tables, run_experiment, RunOptions};

fn config(json: &str, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_json(json).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

fn run(cfg: &ExperimentConfig, jobs: usize) -> laea_harness::RunReport {
    run_experiment(cfg, &RunOptions { jobs, out: None }).unwrap()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

const CASE2D: &str = r#"{
    "schema": 1, "experiment": "case2d",
    "problems": ["ellipsoid", "griewank"],
    "arms": [{"name": "perfect", "predictor": {"kind": "oracle", "mode": "perfect"}}],
    "seeds": [3, 4], "output_dir": "unused"
}"#;

#[test]
fn case2d_points_and_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(CASE2D, dir.path());
    let report = run(&cfg, 2);
    let table = report.output.table.unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.rows.iter().all(|r| r.mean == 1.0 && r.std == 0.0));

    let points = read(&dir.path().join("cells/perfect/griewank-seed3.csv"));
    let lines: Vec<&str> = points.lines().collect();
    assert_eq!(lines[0], "problem,x1,x2,true_label,pred_label_cla,pred_label_reg");
    assert_eq!(lines.len(), 401);
    assert!(lines[1].starts_with("griewank,-600,-600,"));
    assert!(dir.path().join("summary.csv").exists());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn case2d_rank_half_labeling_is_selectable() {
    let dir = tempfile::tempdir().unwrap();
    let text = CASE2D.replace("\"seeds\"", "\"case2d\": {\"reg_labeling\": \"rank-half\"}, \"seeds\"");
    let table = run(&config(&text, dir.path()), 1).output.table.unwrap();
    let reg = table.find("ellipsoid", 2, "perfect", "acc_reg").unwrap();
    let cla = table.find("ellipsoid", 2, "perfect", "acc_cla").unwrap();
    assert_eq!(cla.mean, 1.0);
    // half of the grid is labeled better, whatever the training median says
    assert!(reg.mean < 1.0);
    let points = read(&dir.path().join("cells/perfect/ellipsoid-seed3.csv"));
    let positives = points.lines().skip(1).filter(|l| l.ends_with(",1")).count();
    assert_eq!(positives, 200);
}

const SELECT: &str = r#"{
    "schema": 1, "experiment": "select-acc",
    "problems": ["rosenbrock"], "dims": [5],
    "arms": [
        {"name": "perfect", "predictor": {"kind": "oracle", "mode": "perfect"}},
        {"name": "recall", "predictor": {"kind": "recall", "parallelism": 4}}
    ],
    "seeds": {"master": 1, "runs": 3},
    "select_acc": {"ga": {"pop_size": 20}, "generations": [2, 5]},
    "output_dir": "unused"
}"#;

#[test]
fn select_acc_writes_datasets_and_stage_scores() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(SELECT, dir.path());
    let table = run(&cfg, 2).output.table.unwrap();
    let f1 = table.find("all", 5, "perfect", "reg_f1").unwrap();
    assert_eq!((f1.mean, f1.std), (1.0, 0.0));
    let dataset = read(&dir.path().join("datasets/rosenbrock-5.csv"));
    // 3 runs x 2 generations x (20 parents + 20 offspring)
    assert_eq!(dataset.lines().count(), 1 + 3 * 2 * 40);
    let stages = read(&dir.path().join("f1_by_stage.csv"));
    assert_eq!(stages.lines().count(), 1 + 2 * 2 * 2);
    assert!(read(&dir.path().join("selection.txt")).contains("1.00 (0.00)"));

    // the recall stand-in goes through the full prompt path
    let scores = read(&dir.path().join("cells/recall/rosenbrock-5.csv"));
    assert_eq!(scores.lines().count(), 1 + 3 * 2 * 2);
}

#[test]
fn select_acc_reads_given_datasets() {
    let first = tempfile::tempdir().unwrap();
    let cfg = config(SELECT, first.path());
    run(&cfg, 1);

    let second = tempfile::tempdir().unwrap();
    let mut reuse = config(SELECT, second.path());
    reuse.select_acc.dataset_dir = Some(first.path().join("datasets"));
    run(&reuse, 1);
    assert_eq!(read(&first.path().join("summary.csv")), read(&second.path().join("summary.csv")));
    assert!(!second.path().join("datasets").exists());
}

#[test]
fn select_acc_missing_dataset_is_invalid_state() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(SELECT, &dir.path().join("out"));
    cfg.select_acc.dataset_dir = Some(dir.path().join("nowhere"));
    let err = run_experiment(&cfg, &RunOptions::default()).unwrap_err();
    match err.downcast_ref::<laea_core::Error>() {
        Some(laea_core::Error::InvalidState(msg)) => assert!(msg.contains("rosenbrock-5.csv")),
        other => panic!("unexpected error {other:?}: {err:#}"),
    }
}

const COMPARE: &str = r#"{
    "schema": 1, "experiment": "compare",
    "problems": ["ellipsoid", "ackley"], "dims": [3],
    "arms": [
        {"name": "reg perfect", "predictor": {"kind": "oracle", "mode": "perfect"}, "variant": "reg-only"},
        {"name": "full/noisy", "predictor": {"kind": "oracle", "mode": "noisy", "sigma": 0.2}, "variant": "reg-cla"},
        {"name": "reg random", "predictor": {"kind": "oracle", "mode": "random"}, "variant": "reg-only"}
    ],
    "reference_arm": "reg random",
    "seeds": {"master": 0, "runs": 4},
    "budget": 60,
    "laea": {"pop_size": 20, "window": 20},
    "output_dir": "unused"
}"#;

#[test]
fn compare_tables_keep_arm_order_and_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let cfg = config(COMPARE, &out);
    let report = run(&cfg, 4);
    let table = report.output.table.unwrap();
    let arms: Vec<&str> = table.rows.iter().take(3).map(|r| r.arm.as_str()).collect();
    assert_eq!(arms, ["reg perfect", "full/noisy", "reg random"]);
    assert!(table.rows.iter().all(|r| r.rank.is_some()));
    assert!(table.rows.iter().filter(|r| r.arm == "reg random").all(|r| r.symbol.is_none()));

    // cells use file-safe arm names
    assert!(out.join("cells/reg_perfect/ellipsoid-3-seed0.json").exists());
    assert!(out.join("cells/full_noisy/ackley-3-seed3.trace.csv").exists());
    let text = read(&out.join("table.txt"));
    assert!(text.contains("reg random (ref)"));
    assert!(text.lines().any(|l| l.starts_with("mean rank")));
    let ranks = read(&out.join("ranks.csv"));
    assert!(ranks.starts_with("arm,mean_rank,plus,minus,approx\nreg perfect,"));

    let before = (read(&out.join("summary.csv")), text, ranks);
    fs::remove_file(out.join("summary.csv")).unwrap();
    let rebuilt = rebuild_tables(&out).unwrap();
    assert_eq!(rebuilt.table.unwrap(), table);
    assert_eq!(before, (read(&out.join("summary.csv")), read(&out.join("table.txt")), read(&out.join("ranks.csv"))));

    // nothing lands next to the results directory
    let siblings: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(siblings.len(), 1);

    let manifest: serde_json::Value = serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["config"]["experiment"], "compare");
    assert_eq!(manifest["failures"]["reg perfect"]["cells"], 8);
    assert!(manifest["git_describe"].is_string());
}

#[test]
fn compare_jobs_do_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(&config(COMPARE, a.path()), 1);
    run(&config(COMPARE, b.path()), 6);
    for f in ["summary.csv", "ranks.csv", "table.txt", "cells/full_noisy/ellipsoid-3-seed2.trace.csv"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
}

#[test]
fn preselect_uses_random_arm_as_reference() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
        "schema": 1, "experiment": "preselect",
        "problems": ["griewank"], "dims": [4],
        "arms": [
            {"name": "cla", "predictor": {"kind": "oracle", "mode": "perfect"}, "strategy": "cla"},
            {"name": "random", "predictor": {"kind": "oracle", "mode": "random"}, "strategy": "random"}
        ],
        "seeds": {"master": 5, "runs": 3},
        "budget": 120,
        "output_dir": "unused"
    }"#;
    let cfg = config(text, dir.path());
    assert_eq!(cfg.reference().name, "random");
    let table = run(&cfg, 2).output.table.unwrap();
    assert!(table.find("griewank", 4, "random", "best_f").unwrap().symbol.is_none());
    assert!(table.find("griewank", 4, "cla", "best_f").unwrap().symbol.is_some());

    let without_random = text.replace("\"strategy\": \"random\"", "\"strategy\": \"reg\"");
    assert!(ExperimentConfig::from_json(&without_random).is_err());
}

#[test]
fn timing_rows_and_prompt_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
        "schema": 1, "experiment": "timing",
        "problems": ["ackley"],
        "arms": [{"name": "echo", "predictor": {"kind": "echo"}}],
        "seeds": [0],
        "timing": {"test_size": 6, "parallelism": 3},
        "output_dir": "unused"
    }"#;
    run(&config(text, dir.path()), 1);
    let timing = read(&dir.path().join("timing.csv"));
    let rows: Vec<Vec<String>> = timing.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 8);
    let chars = |task: &str, dim: &str, beta: &str| -> f64 {
        let r = rows.iter().find(|r| r[2] == task && r[3] == dim && r[4] == beta).unwrap();
        assert_eq!(r[5], "6");
        r[6].parse().unwrap()
    };
    for dim in ["5", "10"] {
        for task in ["reg", "cla"] {
            assert!(chars(task, dim, "5") >= chars(task, dim, "3"));
        }
        for beta in ["3", "5"] {
            assert!(chars("cla", dim, beta) < chars("reg", dim, beta));
        }
    }
    let calls = read(&dir.path().join("calls.csv"));
    assert!(calls.starts_with("arm,mode,beta,task,dim,chars,approx_tokens,latency_s,outcome\n"));
    // 8 settings x 2 modes x 6 queries
    assert_eq!(calls.lines().count(), 1 + 96);
}

#[test]
fn timing_rejects_oracle_arms() {
    let text = r#"{
        "schema": 1, "experiment": "timing", "problems": ["ackley"],
        "arms": [{"name": "o", "predictor": {"kind": "oracle", "mode": "perfect"}}],
        "seeds": [0], "output_dir": "unused"
    }"#;
    assert!(ExperimentConfig::from_json(text).is_err());
}

#[test]
fn golden_prompts_match() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/prompts");
    let reports = validate_dir(&dir, false).unwrap();
    assert_eq!(reports.len(), 6);
    for r in reports {
        assert_eq!(r.status, FixtureStatus::Match, "{}", r.name);
    }
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            ExperimentConfig::load(&path).unwrap();
            count += 1;
        }
    }
    assert!(count >= 5);
}
