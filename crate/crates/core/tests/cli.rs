//! End-to-end runs of the `design-eval` binary against the fixtures.
//!
//! Golden reports live in tests/golden. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test --test cli` after an intended change.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_design-eval");

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Copy the fixtures into a scratch directory so outputs land there.
fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    dir
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().unwrap()
}

fn assert_close(path: &str, got: &Value, want: &Value) {
    match (got, want) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{path}: {a} vs golden {b}");
        }
        (Value::Object(a), Value::Object(b)) => {
            let ka: Vec<&String> = a.keys().collect();
            let kb: Vec<&String> = b.keys().collect();
            assert_eq!(ka, kb, "{path}: keys differ");
            for (k, v) in a {
                assert_close(&format!("{path}.{k}"), v, &b[k]);
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "{path}: lengths differ");
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                assert_close(&format!("{path}[{i}]"), x, y);
            }
        }
        _ => assert_eq!(got, want, "{path}"),
    }
}

fn check_golden(config: &str) -> (Value, tempfile::TempDir) {
    let dir = workspace();
    let out = run(&["eval", "--config", &format!("{config}.json")], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: Value = serde_json::from_str(&text).unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden(config).parent().unwrap()).unwrap();
        std::fs::write(golden(config), &text).unwrap();
    }
    let want: Value = serde_json::from_str(&std::fs::read_to_string(golden(config)).unwrap()).unwrap();
    assert_close(config, &report, &want);
    (report, dir)
}

#[test]
fn similarity_battery_matches_golden() {
    let (report, dir) = check_golden("similarity");
    assert_eq!(report.as_object().unwrap().len(), 10);
    let curve = std::fs::read_to_string(dir.path().join("pr_curve.csv")).unwrap();
    assert!(curve.starts_with("set,lambda_index,precision,recall\n"));
    assert_eq!(curve.lines().count(), 1 + 1000);
}

#[test]
fn exploration_battery_matches_golden() {
    let (report, _) = check_golden("exploration");
    assert!(report["distance_to_centroid"]["per_point"].is_array());
}

#[test]
fn constraint_battery_matches_golden() {
    let (report, _) = check_golden("constraints");
    let mean = report["constraint_satisfaction"]["value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&mean));
}

#[test]
fn quality_battery_has_six_labeled_entries() {
    let (report, dir) = check_golden("quality");
    for name in [
        "hypervolume",
        "generational_distance",
        "target_achievement_rate",
        "signed_distance_to_target",
        "minimum_target_ratio",
        "dtai",
    ] {
        assert!(report[name]["value"].is_number(), "{name}");
    }
    let pareto = std::fs::read_to_string(dir.path().join("pareto.csv")).unwrap();
    assert!(pareto.starts_with("set,index,f1,f2\n"));
}

#[test]
fn conditioning_battery_matches_golden() {
    let (report, _) = check_golden("conditioning");
    let names: Vec<&String> = report.as_object().unwrap().keys().collect();
    assert!(names.iter().any(|n| n.as_str() == "mmd[conditional@sweep]"), "{names:?}");
}

#[test]
fn identical_sets_have_zero_nearest_distance() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("same.json"),
        r#"{"inputs": {"dataset": "sixmode_data.csv", "generated": "sixmode_data.csv"},
            "metrics": [{"metric": "nearest_datapoint"}]}"#,
    )
    .unwrap();
    let out = run(&["eval", "--config", "same.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["nearest_datapoint"]["value"].as_f64(), Some(0.0));
}

#[test]
fn validation_failure_is_fatal_and_names_the_code() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"inputs": {"dataset": "sixmode_data.csv", "generated": "sixmode_generated.csv"},
            "metrics": [{"metric": "signed_distance_to_constraints"}]}"#,
    )
    .unwrap();
    let out = run(&["eval", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CFC"));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn metric_errors_give_exit_code_two() {
    let dir = workspace();
    // every generated row is a copy of the first, so DPP subsets collapse
    let row = "0.5,0.5\n".repeat(30);
    std::fs::write(dir.path().join("dupes.csv"), format!("x1,x2\n{row}")).unwrap();
    std::fs::write(
        dir.path().join("dupes.json"),
        r#"{"inputs": {"generated": "dupes.csv"},
            "metrics": [{"metric": "dpp_diversity", "bandwidth": {"fixed": 1.0}}, {"metric": "distance_to_centroid"}]}"#,
    )
    .unwrap();
    let out = run(&["eval", "--config", "dupes.json"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(report["dpp_diversity"]["error"].as_str().unwrap().contains("collapse"));
    assert_eq!(report["distance_to_centroid"]["value"].as_f64(), Some(0.0));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = workspace();
    std::fs::write(
        dir.path().join("typo.json"),
        r#"{"inputs": {"generated": "sixmode_data.csv"}, "metrics": [{"metric": "entropy", "binz": 4}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["eval", "--config", "typo.json"], dir.path()).status.code(), Some(1));
}

#[test]
fn synth_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    for (name, seed) in [("a.csv", "3"), ("b.csv", "3"), ("c.csv", "4")] {
        let out = run(&["synth", "ring", "--n", "21", "--seed", seed, "--out", name], dir.path());
        assert!(out.status.success());
    }
    let read = |n: &str| std::fs::read_to_string(dir.path().join(n)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
    let text = read("a.csv");
    assert_eq!(text.lines().next(), Some("x1,x2,sdf1,valid"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",1")).count(), 11);
    assert_eq!(text.lines().filter(|l| l.ends_with(",0")).count(), 10);
}

#[test]
fn demo_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["demo", "quality", "--seed", "3", "--out", "q"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("q/report.json")).unwrap()).unwrap();
    assert_eq!(report.as_object().unwrap().len(), 12);
    assert!(dir.path().join("q/pareto.csv").exists());
    assert_eq!(run(&["demo", "nonsense", "--seed", "1"], dir.path()).status.code(), Some(1));
}
