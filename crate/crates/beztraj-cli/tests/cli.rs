//! End-to-end tests of the `beztraj` binary: exit-code contract, canonical
//! round-trips, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use beztraj_cli::schema::{system_from_json, system_to_json, SystemJson};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beztraj"))
}

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn compile_to(config: &str, dir: &Path) -> PathBuf {
    let out = run(&[
        "compile",
        "--config",
        repo_config(config).to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir.join("system.json")
}

#[test]
fn compile_vehicle_three_param_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sys = compile_to("vehicle_three_param.json", dir.path());
    let text = std::fs::read_to_string(&sys).unwrap();
    let json: SystemJson = serde_json::from_str(&text).unwrap();
    assert_eq!(json.relations.len(), 18); // nine double inequalities
    assert_eq!(
        json.bounds.keys().cloned().collect::<Vec<_>>(),
        ["a1", "a2", "a3"]
    );
}

#[test]
fn compile_quad_scenario_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sys = compile_to("quad_scenario1.json", dir.path());
    let text = std::fs::read_to_string(&sys).unwrap();
    let json: SystemJson = serde_json::from_str(&text).unwrap();
    // 17 bounded control points; the four relations on the constant
    // endpoint accelerations are tautological and dropped
    assert_eq!(json.relations.len(), 30);
}

#[test]
fn compile_round_trip_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let sys = compile_to("vehicle_three_param.json", dir.path());
    let text = std::fs::read_to_string(&sys).unwrap();
    let json: SystemJson = serde_json::from_str(&text).unwrap();
    let reread = system_from_json(&json).unwrap();
    let rewritten = serde_json::to_string_pretty(&system_to_json(&reread)).unwrap() + "\n";
    assert_eq!(text, rewritten);
}

#[test]
fn compile_rejects_degree_too_low() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"version":1,"model":{"name":"vehicle","curve":{"degree":1,"horizon":1.0,
            "pinned":{"0":0.0},"param_box":[-1.0,1.0]},"input_bounds":[0.0,10.0]}}"#,
    )
    .unwrap();
    let out = run(&["compile", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sys = compile_to("vehicle_three_param.json", dir.path());
    let sys = sys.to_str().unwrap();

    let ok = run(&["check", "--system", sys, "--point", "1,1,1"]);
    assert_eq!(code(&ok), 0);
    let report = String::from_utf8(ok.stdout).unwrap();
    assert!(report.contains("\"feasible\": true"));

    // U8 = 5 - 4*1.3 = -0.2 < 0
    let bad = run(&["check", "--system", sys, "--point", "2,2.3,1.3"]);
    assert_eq!(code(&bad), 1);
    let report = String::from_utf8(bad.stdout).unwrap();
    assert!(report.contains("\"feasible\": false"));
    assert!(report.contains("U8_lo"));

    let wrong_dim = run(&["check", "--system", sys, "--point", "1,1"]);
    assert_eq!(code(&wrong_dim), 2);
    let garbage = run(&["check", "--system", sys, "--point", "a,b,c"]);
    assert_eq!(code(&garbage), 2);
}

#[test]
fn region_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sys = compile_to("vehicle_two_param.json", dir.path());
    let sys = sys.to_str().unwrap();
    let mut snapshots = Vec::new();
    for sub in ["r1", "r2"] {
        let out_dir = dir.path().join(sub);
        let out = run(&[
            "region",
            "--system",
            sys,
            "--min-width",
            "0.05",
            "--seed",
            "7",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        snapshots.push((
            std::fs::read(out_dir.join("region.json")).unwrap(),
            std::fs::read(out_dir.join("region_boxes.csv")).unwrap(),
        ));
    }
    assert_eq!(snapshots[0], snapshots[1]);
    let json: serde_json::Value =
        serde_json::from_slice(&snapshots[0].0).unwrap();
    assert!(json["stats"]["inside_count"].as_u64().unwrap() > 0);
    assert!(json["stats"]["mc_fraction"].as_f64().is_some());
}

#[test]
fn region_budget_marks_partial() {
    let dir = tempfile::tempdir().unwrap();
    let sys = compile_to("vehicle_two_param.json", dir.path());
    let out = run(&[
        "region",
        "--system",
        sys.to_str().unwrap(),
        "--budget",
        "10",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("region.json")).unwrap())
            .unwrap();
    assert_eq!(json["stats"]["partial"], serde_json::Value::Bool(true));
}

#[test]
fn simulate_feasible_point_clean_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for sub in ["s1", "s2"] {
        let out_dir = dir.path().join(sub);
        let out = run(&[
            "simulate",
            "--config",
            repo_config("vehicle_three_param.json").to_str().unwrap(),
            "--point",
            "1,1,1",
            "--strict",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(std::fs::read(out_dir.join("trajectory.csv")).unwrap());
        let audit: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out_dir.join("audit.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(audit["clean"], serde_json::Value::Bool(true));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn simulate_strict_flags_bad_point() {
    let dir = tempfile::tempdir().unwrap();
    // a1 = 5.5 drives the initial input to 22, far above the band
    let out = run(&[
        "simulate",
        "--config",
        repo_config("vehicle_three_param.json").to_str().unwrap(),
        "--point",
        "5.5,2.3,1.2",
        "--strict",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let audit: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("audit.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(audit["clean"], serde_json::Value::Bool(false));
    // without --strict the same run exits 0
    let lax = run(&[
        "simulate",
        "--config",
        repo_config("vehicle_three_param.json").to_str().unwrap(),
        "--point",
        "5.5,2.3,1.2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&lax), 0);
}

#[test]
fn simulate_quad_gamma7_flags_thrust() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--config",
        repo_config("quad_gamma7.json").to_str().unwrap(),
        "--point",
        "8,12.5,9",
        "--strict",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let audit: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("audit.json")).unwrap(),
    )
    .unwrap();
    let names: Vec<&str> = audit["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"u1"), "{names:?}");
}

#[test]
fn envelope_exports_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "envelope",
        "--config",
        repo_config("quad_scenario1.json").to_str().unwrap(),
        "--point",
        "8,12.5,9",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("envelope.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau,lower,upper"));
    assert_eq!(lines.count(), 9);
}
