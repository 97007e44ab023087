//! End-to-end checks of the `hpz` binary: exit codes, error JSON, file
//! outputs, and byte-determinism of CSV exports.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hpz"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hpz-cli-test-{}-{}", tag, std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_bundled_model_writes_outputs() {
    let dir = temp_dir("run");
    let out = bin()
        .args([
            "run",
            "--out",
            dir.to_str().unwrap(),
            "--steps",
            "3",
            "--grid-res",
            "3",
            "--samples",
            "100",
            "--emit",
            "both",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    for k in 0..=3 {
        assert!(dir.join(format!("step_{}.csv", k)).exists(), "step {}", k);
    }
    assert!(dir.join("diagnostics.json").exists());
    assert!(dir.join("reach.svg").exists());
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("diagnostics.json")).unwrap())
            .unwrap();
    assert_eq!(diag["steps"], 3);
    assert_eq!(diag["per_step"].as_array().unwrap().len(), 4);
    let header = std::fs::read_to_string(dir.join("step_1.csv")).unwrap();
    assert!(header.starts_with("step,x1,x2,leaf\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_flags_give_identical_csv_bytes() {
    let d1 = temp_dir("det1");
    let d2 = temp_dir("det2");
    for d in [&d1, &d2] {
        let out = bin()
            .args([
                "run",
                "--out",
                d.to_str().unwrap(),
                "--steps",
                "2",
                "--seed",
                "42",
                "--grid-res",
                "3",
                "--samples",
                "80",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for k in 0..=2 {
        let a = std::fs::read(d1.join(format!("step_{}.csv", k))).unwrap();
        let b = std::fs::read(d2.join(format!("step_{}.csv", k))).unwrap();
        assert_eq!(a, b, "step {} differs between identical runs", k);
    }
    std::fs::remove_dir_all(&d1).ok();
    std::fs::remove_dir_all(&d2).ok();
}

#[test]
fn missing_model_file_is_io_error_with_json() {
    let out = bin()
        .args(["run", "--model", "/nonexistent/model.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr must be machine-readable JSON");
    assert_eq!(err["kind"], "io");
    assert_eq!(err["exit_code"], 3);
}

#[test]
fn malformed_json_is_parse_error() {
    let dir = temp_dir("parse");
    let path = dir.join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin()
        .args(["run", "--model", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "parse");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn schema_violation_names_the_field() {
    let dir = temp_dir("schema");
    let path = dir.join("bad.json");
    // Valid JSON, unknown top-level key.
    std::fs::write(
        &path,
        r#"{"state_dim": 2, "horizon": 1, "modes": [], "initial_set": {"center": [0,0], "generators": []}, "bogus": 1}"#,
    )
    .unwrap();
    let out = bin()
        .args(["run", "--model", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "schema");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_leaf_cap_env_is_usage_error() {
    let out = bin()
        .env("HPZ_LEAF_CAP", "not-a-number")
        .args(["run", "--steps", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "usage");
}

#[test]
fn tiny_leaf_cap_is_budget_error() {
    // The bundled initial set has no binary factors, but the piece engine
    // still honors the cap when splitting; a zero cap with binary demo sets
    // is exercised via demo instead. Here: force a budget failure by giving
    // the run a cap of 0 and a model whose input set has binary factors.
    let dir = temp_dir("cap");
    let model = r#"{
        "state_dim": 1,
        "horizon": 1,
        "modes": [{
            "guard": {"L": [], "rho": []},
            "quadratic": [[[0.0]]],
            "linear": [[1.0]],
            "offset": [0.0]
        }],
        "initial_set": {
            "center": [0.0],
            "generators": [[1.0]],
            "binary_generators": [[0.5, 0.25]]
        }
    }"#;
    let path = dir.join("model.json");
    std::fs::write(&path, model).unwrap();
    let out = bin()
        .env("HPZ_LEAF_CAP", "1")
        .args([
            "run",
            "--model",
            path.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(7),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "budget");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn containment_check_passes_on_bundled_model() {
    let dir = temp_dir("contain");
    let out = bin()
        .args([
            "run",
            "--out",
            dir.to_str().unwrap(),
            "--steps",
            "3",
            "--grid-res",
            "3",
            "--samples",
            "60",
            "--check-containment",
            "5",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn demo_writes_all_bundled_sets() {
    let dir = temp_dir("demo");
    let out = bin()
        .args([
            "demo",
            "--out",
            dir.to_str().unwrap(),
            "--grid-res",
            "5",
            "--samples",
            "200",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in ["cpz1", "hz", "hpz1", "hpz2"] {
        assert!(dir.join(format!("{}.csv", name)).exists(), "{}", name);
        assert!(dir.join(format!("{}.svg", name)).exists(), "{}", name);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ops_check_agrees_and_exits_zero() {
    let out = bin()
        .args(["ops-check", "--trials", "4", "--seed", "11"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stdout: {} stderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for op in ["linear_map", "minkowski_sum", "cartesian_product", "union"] {
        assert_eq!(report[op]["agreeing"], report[op]["trials"], "{}", op);
    }
}

#[test]
fn model_roundtrip_through_write_and_parse() {
    use hpz_cli::model::{parse_model_str, write_model};
    let file = hpz_cli::fixtures::pwna_model_file();
    let text = write_model(&file);
    let back = parse_model_str(&text).unwrap();
    assert_eq!(write_model(&back), text);
}
