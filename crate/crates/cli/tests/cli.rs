use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn expanse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expanse")).args(args).output().expect("expanse runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, config: &Value) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/examples")
}

fn tent_family(slope: f64, epsilon: Value) -> Value {
    json!({
        "name": "tent-family",
        "space": { "type": "unit_interval" },
        "map": { "type": "tent", "slope": slope },
        "cloud": { "generator": { "kind": "grid_uniform" }, "n": 1025 },
        "measures": {
            "left": { "kind": "dirac", "point": 0.25 },
            "right": { "kind": "dirac", "point": 0.75 }
        },
        "operation": "verify-A",
        "params": { "family": ["left", "right"] },
        "grids": { "epsilon": epsilon }
    })
}

fn run(config: &Path, out: &Path) -> Output {
    expanse(&["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

#[test]
fn completed_run_exits_zero_and_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&examples().join("rotation.json"), tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("rotation.json")).unwrap()).unwrap();
    assert_eq!(report["operation"], "exponent-map");
    assert!(report["result"]["map_exponent"].as_f64().unwrap().abs() < 1e-9);
    let csv = std::fs::read_to_string(tmp.path().join("rotation.profile.csv")).unwrap();
    assert!(csv.starts_with("epsilon,lambda_hat,pair_count\n"));
}

#[test]
fn failed_theorem_check_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    // the fold collapses pairs, so the map exponent is -inf while both diracs see log 1.5
    let cfg = write_config(tmp.path(), "tent", &tent_family(1.5, json!([0.01, 0.02, 0.05, 0.1])));
    let o = run(&cfg, tmp.path());
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let report: Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("tent-family.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["verdict"], "fail");
    assert_eq!(report["result"]["quantities"]["map_exponent"], "-inf");
}

#[test]
fn configuration_errors_exit_two_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "steep", &tent_family(2.5, json!([0.01, 0.1])));
    let o = expanse(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("steep.json: map: configuration error"), "{}", stderr(&o));

    let mut unknown = tent_family(1.5, json!([0.01, 0.1]));
    unknown["grids"]["sigma"] = json!([1]);
    let cfg = write_config(tmp.path(), "unknown", &unknown);
    let o = expanse(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("grids.sigma"), "{}", stderr(&o));

    let mut decreasing = tent_family(1.5, json!([0.1, 0.01]));
    decreasing["name"] = json!("decreasing");
    let cfg = write_config(tmp.path(), "decreasing", &decreasing);
    assert_eq!(code(&expanse(&["validate", cfg.to_str().unwrap()])), 2);

    let o = expanse(&["validate", tmp.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn epsilon_below_floor_exits_three_naming_the_floor() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "fine", &tent_family(1.5, json!([0.001, 0.01])));
    let o = run(&cfg, tmp.path());
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(err.contains("grids.epsilon") && err.contains("floor 0.001953125"), "{err}");
    assert!(!tmp.path().join("tent-family.json").exists());
}

#[test]
fn too_few_capacity_scales_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = json!({
        "name": "short",
        "space": { "type": "unit_interval" },
        "cloud": { "generator": { "kind": "grid_uniform" }, "n": 1001 },
        "operation": "capacity",
        "grids": { "beta": [0.05, 0.1], "delta": [0.0] }
    });
    let path = write_config(tmp.path(), "short", &cfg);
    assert_eq!(code(&run(&path, tmp.path())), 3);
}

#[test]
fn expansivity_check_on_rotation_is_not_applicable() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = json!({
        "name": "rotation-b",
        "space": { "type": "circle" },
        "map": { "type": "rotation", "alpha": 0.25 },
        "cloud": { "generator": { "kind": "grid_uniform" }, "n": 1024 },
        "operation": "verify-B",
        "grids": { "epsilon": [0.05, 0.1, 0.2] }
    });
    let path = write_config(tmp.path(), "rotation-b", &cfg);
    let o = run(&path, tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("rotation-b.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["report"]["verdict"], "not-applicable");
}

#[test]
fn seed_override_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = examples().join("rotation.json");
    let o = expanse(&["run", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap(), "--seed", "99"]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("rotation.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 99);
}

#[test]
fn verify_c_example_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&examples().join("doubling-verify-c.json"), tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("doubling-verify-c.json")).unwrap()).unwrap();
    assert!(report["result"]["report"]["margin"].as_f64().unwrap() >= 0.0);
}

fn summary(dir: &Path, file: &str) -> Vec<csv::StringRecord> {
    let mut rd = csv::Reader::from_path(dir.join(file)).unwrap();
    assert_eq!(
        rd.headers().unwrap(),
        vec!["config", "name", "operation", "estimate", "margin", "verdict", "exit_code", "wall_time_s", "error"]
    );
    rd.records().map(Result::unwrap).collect()
}

#[test]
fn batch_sweeps_match_closed_forms() {
    let tmp = tempfile::tempdir().unwrap();
    let o = expanse(&["batch", examples().join("sweeps.json").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = summary(tmp.path(), "sweeps.summary.csv");
    assert_eq!(rows.len(), 18);
    let est = |r: &csv::StringRecord| r[3].parse::<f64>().unwrap();
    let tent: Vec<_> = rows.iter().filter(|r| r[1].starts_with("tent-measure-")).collect();
    for (i, r) in tent.iter().enumerate() {
        let s = 1.1 + 0.1 * i as f64;
        assert!((est(r) - s.ln()).abs() < 1e-9, "{:?}", r);
    }
    for r in rows.iter().filter(|r| r[1].starts_with("rotation-")) {
        assert!(est(r).abs() < 1e-9);
    }
    let ps = [0.1f64, 0.25, 0.5, 0.75];
    for (r, p) in rows.iter().filter(|r| r[1].starts_with("bernoulli-")).zip(ps) {
        let h = -(p * p.ln() + (1.0 - p) * (1.0 - p).ln());
        assert!((est(r) - h).abs() < 1e-9, "{:?}", r);
    }
    assert!(tmp.path().join("bernoulli-02.block_entropy.csv").exists());
}

#[test]
fn batch_captures_errors_and_continues() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "fine", &tent_family(1.5, json!([0.001, 0.01])));
    let failing = write_config(tmp.path(), "failing", &tent_family(1.5, json!([0.01, 0.1])));
    let batch = json!([
        bad.file_name().unwrap().to_str().unwrap(),
        { "config": examples().join("rotation.json"), "set": { "/map/alpha": 0.5 } },
        failing.file_name().unwrap().to_str().unwrap()
    ]);
    let path = write_config(tmp.path(), "mixed", &batch);
    let out = tmp.path().join("out");
    let o = expanse(&["batch", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let rows = summary(&out, "mixed.summary.csv");
    let codes: Vec<&str> = rows.iter().map(|r| &r[6]).collect();
    assert_eq!(codes, ["3", "0", "1"]);
    assert!(rows[0][8].contains("floor"));
    assert_eq!(&rows[2][5], "fail");
}
