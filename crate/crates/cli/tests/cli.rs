use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_julia-shift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_quadratic_depth_eight() {
    let cfg = config("quadratic.toml");
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--depth", "8", "--level", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("5/5 checks pass, 256 cylinders"), "{}", stdout(&o));
}

#[test]
fn connected_julia_set_exits_with_hypothesis_code() {
    let cfg = config("connected.toml");
    let o = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn missing_config_is_a_usage_error() {
    let o = run(&["analyze", "--config", "/nonexistent/map.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["analyze"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tiny_budget_is_a_certification_failure() {
    let cfg = config("quadratic.toml");
    let o = Command::new(env!("CARGO_BIN_EXE_julia-shift"))
        .args(["analyze", "--config", cfg.to_str().unwrap(), "--depth", "3"])
        .env("JULIA_SHIFT_MAX_BOXES", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn analyze_writes_tree_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("quadratic.toml");
    let args = ["analyze", "--config", cfg.to_str().unwrap(), "--depth", "4", "--out", dir.path().to_str().unwrap()];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for (k, n) in [(0, 1), (1, 2), (2, 4), (3, 8), (4, 16)] {
        assert!(text.lines().any(|l| l.split_whitespace().take(2).eq([k.to_string(), n.to_string()].iter().map(String::as_str))));
    }
    let first = std::fs::read(dir.path().join("tree.json")).unwrap();
    let json: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(json["levels"][4].as_array().unwrap().len(), 16);
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(dir.path().join("tree.json")).unwrap());
}

#[test]
fn code_and_render_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = config("quadratic.toml");
    let cfg = cfg.to_str().unwrap();
    assert_eq!(run(&["code", "--config", cfg, "--depth", "3", "--out", out]).status.code(), Some(0));
    let coding: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("coding.json")).unwrap()).unwrap();
    assert_eq!(coding["levels"][1]["1.0"]["symbols"], serde_json::json!([0]));
    let render = ["render", "--config", cfg, "--depth", "1", "--level", "1", "--size", "300", "--out", out];
    assert_eq!(run(&render).status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("level-1.svg")).unwrap();
    assert_eq!(svg.matches("<g id=").count(), 2);
    assert_eq!(run(&render).status.code(), Some(0));
    assert_eq!(svg, std::fs::read_to_string(dir.path().join("level-1.svg")).unwrap());
}

#[test]
fn chi_of_cubic_critical_point() {
    let cfg = config("cubic.toml");
    let o = run(&["chi", "--config", cfg.to_str().unwrap(), "--depth", "2", "--point", "1.5,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("chi = 2 (certified)"), "{}", stdout(&o));
}

#[test]
fn oracle_test_passes() {
    let o = run(&["oracle-test", "--seed", "3", "--cases", "50", "--d", "4", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("50/50 cases pass"));
}
