use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mvv() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mvv"));
    c.env_remove("MVV_SEED");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/paper")
        .join(format!("{name}.json"))
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().expect("spawn mvv");
    (
        status.code().expect("exit code"),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn ok_json(cmd: &mut Command) -> Value {
    let (code, out, err) = run(cmd);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).expect("stdout is JSON")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn analyze(name: &str, k: i64) -> Value {
    ok_json(
        mvv()
            .args(["analyze", "--k", &k.to_string(), "--in"])
            .arg(fixture(name)),
    )
}

/// Writes a scene and a synthesized tuple into `dir`.
fn scene_and_tuple(dir: &TempDir, k: i64, cameras: &str, seed: u64) -> (PathBuf, PathBuf) {
    let scene = dir.path().join("scene.json");
    let tuple = dir.path().join("tuple.json");
    let seed = seed.to_string();
    let k = k.to_string();
    let (code, _, err) = run(mvv().args([
        "gen", "--scene", "--N", "3", "--k", &k, "--cameras", cameras, "--seed", &seed, "--out",
    ])
    .arg(&scene));
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = run(mvv()
        .args(["synthesize", "--seed", &seed, "--scene"])
        .arg(&scene)
        .arg("--out")
        .arg(&tuple));
    assert_eq!(code, 0, "{err}");
    (scene, tuple)
}

#[test]
fn analyze_two_skew_lines_for_points() {
    let r = analyze("two_lines_p3", 0);
    assert_eq!(r["ell"], 1);
    assert_eq!(r["triangulable"], false);
    assert_eq!(r["dim_M"], 2);
    assert_eq!(r["meta"]["command"], "analyze");
    assert_eq!(r["meta"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn analyze_two_points_for_lines() {
    let r = analyze("two_points_p3", 1);
    assert_eq!(r["ell"], 1);
    assert_eq!(r["triangulable"], true);
    assert_eq!(r["proper"], false);
    assert_eq!(r["dim_M"], 4);
    assert!(r["cross_checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["agree"] == true));
}

#[test]
fn analyze_reports_coincident_violation() {
    let r = analyze("coincident_p2", 0);
    assert_eq!(r["pseudo_disjoint"], false);
    assert_eq!(r["pseudo_disjoint_violating"], serde_json::json!([0, 1]));
    assert_eq!(r["ell_pseudo_disjoint"], Value::Null);
}

#[test]
fn gen_is_reproducible_and_carries_a_lattice() {
    let args = ["gen", "--N", "4", "--centers", "1,2,0", "--seed", "11"];
    let (c1, a, _) = run(mvv().args(args));
    let (c2, b, _) = run(mvv().args(args));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["generic"], true);
    assert_eq!(v["centers"].as_array().unwrap().len(), 3);
    // One lattice entry per nonempty index set.
    assert_eq!(v["lattice"].as_array().unwrap().len(), 7);

    let (_, other, _) = run(mvv().args(["gen", "--N", "4", "--centers", "1,2,0", "--seed", "12"]));
    assert_ne!(a, other);
}

#[test]
fn env_seed_overrides_flag() {
    let (_, from_flag, _) = run(mvv().args(["gen", "--N", "3", "--centers", "1,1", "--seed", "7"]));
    let (_, from_env, _) = run(mvv()
        .env("MVV_SEED", "7")
        .args(["gen", "--N", "3", "--centers", "1,1", "--seed", "1"]));
    assert_eq!(from_flag, from_env);
    let (code, _, err) = run(mvv()
        .env("MVV_SEED", "seven")
        .args(["gen", "--N", "3", "--centers", "1"]));
    assert_eq!(code, 1);
    assert!(err.contains("MVV_SEED"), "{err}");
}

#[test]
fn generated_arrangement_feeds_analyze() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("arr.json");
    let (code, _, _) = run(mvv()
        .args(["gen", "--N", "3", "--centers", "0,0", "--seed", "2", "--out"])
        .arg(&path));
    assert_eq!(code, 0);
    let r = ok_json(mvv().args(["analyze", "--k", "0", "--in"]).arg(&path));
    assert_eq!(r["ell"], 0);
    assert_eq!(r["upsilon"]["tag"], "exact-generic");
}

#[test]
fn scene_round_trip_recovers_the_world_line() {
    let dir = TempDir::new().unwrap();
    let (scene, tuple) = scene_and_tuple(&dir, 1, "2,2", 3);
    let s = read(&scene);
    assert_eq!(s["k"], 1);
    assert_eq!(s["cameras"].as_array().unwrap().len(), 2);
    let r = ok_json(
        mvv()
            .args(["triangulate", "--scene"])
            .arg(&scene)
            .arg("--tuple")
            .arg(&tuple),
    );
    assert_eq!(r["status"], "ok");
    assert_eq!(r["plane"], read(&tuple)["world"]);
}

#[test]
fn scene_round_trip_recovers_a_point_from_two_views() {
    let dir = TempDir::new().unwrap();
    let (scene, tuple) = scene_and_tuple(&dir, 0, "2,2", 5);
    let r = ok_json(
        mvv()
            .args(["triangulate", "--scene"])
            .arg(&scene)
            .arg("--tuple")
            .arg(&tuple),
    );
    assert_eq!(r["plane"], read(&tuple)["world"]);
}

#[test]
fn single_camera_is_under_determined() {
    let dir = TempDir::new().unwrap();
    let (scene, tuple) = scene_and_tuple(&dir, 0, "2", 4);
    let (code, _, err) = run(mvv()
        .args(["triangulate", "--scene"])
        .arg(&scene)
        .arg("--tuple")
        .arg(&tuple));
    assert_eq!(code, 2, "{err}");
}

#[test]
fn perturbed_image_point_is_inconsistent() {
    let dir = TempDir::new().unwrap();
    let (scene, tuple) = scene_and_tuple(&dir, 0, "2,2", 6);
    let mut t = read(&tuple);
    let entry = &mut t["planes"][0]["basis"][0][2];
    let moved = if entry == "31/7" { "-5/3" } else { "31/7" };
    *entry = Value::String(moved.into());
    std::fs::write(&tuple, serde_json::to_string(&t).unwrap()).unwrap();
    let (code, _, err) = run(mvv()
        .args(["triangulate", "--scene"])
        .arg(&scene)
        .arg("--tuple")
        .arg(&tuple));
    assert_eq!(code, 3, "{err}");
}

#[test]
fn partition_budget_exits_four() {
    let (code, _, err) = run(mvv()
        .args(["analyze", "--k", "0", "--partition-cap", "1", "--in"])
        .arg(fixture("generic_points_p3_n3")));
    assert_eq!(code, 4, "{err}");
}

#[test]
fn malformed_input_names_the_field() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"N": 3, "centers": [{"N": 3, "basis": [["1", "0/0", "0", "0"]]}]}"#)
        .unwrap();
    let (code, _, err) = run(mvv().args(["analyze", "--k", "0", "--in"]).arg(&path));
    assert_eq!(code, 1);
    assert!(err.contains("centers[0]"), "{err}");
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, _) = run(mvv().args(["gen", "--N", "3", "--centers", "5"]));
    assert_eq!(code, 1);
    let (code, _, _) = run(mvv().args(["analyze", "--k", "3", "--in"]).arg(fixture("two_lines_p3")));
    assert_eq!(code, 1);
    let (code, _, _) = run(mvv().arg("frobnicate"));
    assert_eq!(code, 1);
    let (code, _, _) = run(mvv().arg("--help"));
    assert_eq!(code, 0);
}

#[test]
fn verify_small_sweep_passes() {
    let v = ok_json(mvv().args(["verify", "--cases", "5", "--maxN", "4", "--maxn", "3", "--seed", "9"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["meta"]["seed"], 9);
}

#[test]
fn verify_replays_worked_examples() {
    let v = ok_json(mvv().args(["verify", "--paper-examples"]));
    assert_eq!(v["passed"], true);
    assert!(!v["paper_examples"].as_array().unwrap().is_empty());
    assert!(!v["fixtures"].as_array().unwrap().is_empty());
}
