use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn cyclavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclavg")).args(args).output().expect("binary runs")
}

fn payload(out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(doc["header"]["tool"], "cyclavg");
    assert!(doc["header"]["version"].is_string());
    doc["payload"].clone()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn lower_bounds_of_the_worked_examples() {
    for (preset, bound) in [("example1", 1), ("example2", 2), ("vdp", 1)] {
        let out = cyclavg(&["integrals", "--preset", preset]);
        assert_eq!(code(&out), 0, "{preset}");
        assert_eq!(payload(&out)["lower_bound"], bound, "{preset}");
    }
    let dir = TempDir::new().unwrap();
    let empty = write(dir.path(), "empty.json", &json!({"orientation": "ccw", "epsilon": 0.1, "b": [], "fields": []}));
    let out = cyclavg(&["integrals", &empty]);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["lower_bound"], 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = cyclavg(&["repro", "example1", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn presets_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let names = payload(&cyclavg(&["preset"]))["presets"].clone();
    for name in names.as_array().unwrap() {
        let name = name.as_str().unwrap();
        let preset = payload(&cyclavg(&["preset", name]));
        let file = write(dir.path(), &format!("{name}.json"), &preset);
        let again = payload(&cyclavg(&["preset", name]));
        assert_eq!(preset, again);
        let cmd = if preset["spec"].get("monomial").is_some() { "classify" } else { "integrals" };
        let from_file = cyclavg(&[cmd, &file]);
        let from_name = cyclavg(&[cmd, "--preset", name]);
        assert_eq!(code(&from_file), 0, "{name}: {}", String::from_utf8_lossy(&from_file.stderr));
        assert_eq!(from_file.stdout, from_name.stdout, "{name}");
    }
}

#[test]
fn dumped_preset_is_valid_input() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("example2.json");
    assert_eq!(code(&cyclavg(&["preset", "example2", "--out", file.to_str().unwrap()])), 0);
    let out = cyclavg(&["integrals", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(payload(&out)["lower_bound"], 2);
}

#[test]
fn bare_spec_file_matches_preset() {
    let dir = TempDir::new().unwrap();
    let preset = payload(&cyclavg(&["preset", "example1"]));
    let file = write(dir.path(), "spec.json", &preset["spec"]["perturbation"]);
    let out = cyclavg(&["averaged", &file]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, cyclavg(&["averaged", "--preset", "example1"]).stdout);
}

#[test]
fn classify_one_dimensional_system() {
    let dir = TempDir::new().unwrap();
    // (0, x + y³)
    let sys = json!({"a": 0.0, "p": 0, "q": 0, "b": 1.0, "i": 1, "j": 0, "c": 1.0, "k": 0, "l": 3});
    let out = cyclavg(&["classify", &write(dir.path(), "sys.json", &sys)]);
    assert_eq!(code(&out), 0);
    let cert = payload(&out);
    assert_eq!(cert["property"], "P3");
    assert!(cert["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}

#[test]
fn classify_scan_certifies_everything() {
    let out = cyclavg(&["classify", "--scan", "2"]);
    assert_eq!(code(&out), 0);
    let summary = payload(&out);
    assert_eq!(summary["total"], 729 * 27);
    assert!(summary["failures"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"a\": 1.0,").unwrap();
    let out = cyclavg(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());

    // degrees out of order
    let spec = json!({
        "orientation": "ccw", "epsilon": 0.1, "b": [1.0, 1.0],
        "fields": [
            {"alpha": "1/1", "f": [], "g": []},
            {"alpha": "1/2", "f": [], "g": []}
        ]
    });
    assert_eq!(code(&cyclavg(&["integrals", &write(dir.path(), "order.json", &spec)])), 2);

    // exponents must add up to alpha
    let spec = json!({
        "orientation": "ccw", "epsilon": 0.1, "b": [1.0],
        "fields": [{"alpha": "1/2", "f": [{"c": 1.0, "px": "1/3", "py": "0/1", "sx": true, "sy": false}], "g": []}]
    });
    assert_eq!(code(&cyclavg(&["integrals", &write(dir.path(), "degree.json", &spec)])), 2);
    assert_eq!(code(&cyclavg(&["integrals", "--preset", "no-such-preset"])), 2);
    assert_eq!(code(&cyclavg(&["integrals", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn wrong_number_of_targets_exits_2() {
    let out = cyclavg(&["pipeline", "--preset", "example2", "--targets", "1", "2", "3", "--eps", "0.01"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn ambiguous_integral_exits_3() {
    let dir = TempDir::new().unwrap();
    // trace 1e-11/π gives I = 1e-11, inside the dead band (1e-12, 1e-10)
    let t = 1e-11 / std::f64::consts::PI;
    let spec = json!({
        "orientation": "ccw", "epsilon": 0.1, "b": [1.0],
        "fields": [{"alpha": "1/1",
            "f": [{"c": t, "px": "1/1", "py": "0/1", "sx": true, "sy": false}],
            "g": []}]
    });
    let out = cyclavg(&["integrals", &write(dir.path(), "tiny.json", &spec)]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn van_der_pol_pipeline_certifies_one_cycle() {
    let dir = TempDir::new().unwrap();
    let target = (2.0 / 3f64.sqrt()).to_string();
    let csv_dir = dir.path().join("csv");
    let out = cyclavg(&[
        "pipeline", "--preset", "lienard-4", "--targets", &target, "--eps", "0.01",
        "--csv", csv_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = payload(&out);
    let certs = report["runs"][0]["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 1);
    let r = certs[0]["r"].as_f64().unwrap();
    assert!((r - 2.0 / 3f64.sqrt()).abs() < 0.02, "r = {r}");
    let csv_path = report["csv"][0].as_str().unwrap();
    let csv = fs::read_to_string(csv_path).unwrap();
    assert_eq!(csv.lines().next(), Some("r0,P"));
    assert_eq!(csv.lines().count(), 201);
}

#[test]
fn missed_cycle_exits_4() {
    // the bracket hides the inner cycle at 1
    let out = cyclavg(&[
        "pipeline", "--preset", "example2", "--targets", "1", "4", "--eps", "0.01", "--bracket", "2", "6",
    ]);
    assert_eq!(code(&out), 4);
    let report = payload(&out);
    assert_eq!(report["predicted"], 2);
    assert_eq!(report["runs"][0]["certificates"].as_array().unwrap().len(), 1);
}

#[test]
fn simulate_single_return_maps() {
    let out = cyclavg(&["simulate", "--preset", "vdp", "--r0", "0.5", "2.0", "--steps", "2048"]);
    assert_eq!(code(&out), 0);
    let samples = payload(&out)["samples"].clone();
    let samples = samples.as_array().unwrap();
    assert_eq!(samples.len(), 2);
    // inside the cycle the orbit grows, outside it shrinks
    let r1 = |i: usize| samples[i]["r1"].as_f64().unwrap();
    assert!(r1(0) > 0.5 && r1(1) < 2.0);
}
