use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux-forge"))
        .args(args)
        .env_remove("DARBOUX_FORGE_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn build_cylinder(path: &Path) -> Output {
    forge(&[
        "build", "--family", "cylinder", "--curve", "circle:R=1", "--A", "2", "--h0", "1,1,1", "--dim", "3", "--out",
        path.to_str().unwrap(),
    ])
}

#[test]
fn build_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    let report = dir.path().join("report.json");
    let out = build_cylinder(&pair);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = forge(&["verify", "--pair", pair.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    assert!(report["checks"].as_array().unwrap().len() >= 6);
    assert!(report["grid"].is_object());
}

#[test]
fn corrupted_radii_fail_with_the_check_named() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    assert_eq!(code(&build_cylinder(&pair)), 0);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&pair).unwrap()).unwrap();
    for sphere in doc["congruence"].as_array_mut().unwrap() {
        let r = sphere["radius"].as_f64().unwrap();
        sphere["radius"] = Value::from(r + 1e-2);
    }
    std::fs::write(&pair, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = forge(&["verify", "--pair", pair.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("envelope_f"), "{}", stderr(&out));
}

#[test]
fn infeasible_amplitude_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = forge(&[
        "build", "--family", "cone-cylinder", "--curve", "latitude:theta=1.0", "--A", "0.5", "--h0", "1,1,1", "--out",
        dir.path().join("p.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("infeasible: A must exceed c"));
}

#[test]
fn missing_curve_prints_usage() {
    let out = forge(&["build", "--family", "cylinder", "--A", "2", "--h0", "1,1,1", "--out", "x.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("Usage"));
}

#[test]
fn malformed_pair_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"family\": \"cylinder\", \"n\": ").unwrap();
    let out = forge(&["verify", "--pair", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("malformed pair file"));
    let out = forge(&["verify", "--pair", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bonnet_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("b{i}.json"))).collect();
    for p in &paths {
        let out = forge(&["bonnet", "--c", "0", "--trials", "100", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(matches!(code(&out), 0 | 1));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let doc: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["suites"].as_array().unwrap().len(), 2);
}

#[test]
fn corrected_hyperbolic_bonnet_suite_fails_only_the_displayed_cross_term() {
    let out = forge(&["bonnet", "--c", "-1", "--trials", "50", "--constraint", "corrected"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failing: Vec<&str> = doc["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["cross_term_display", "cross_term_bound"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn weyl_reports_one_third() {
    let out = forge(&["weyl", "--c", "0"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["w1221"].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-6);
    let comp = doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "weyl_components").unwrap();
    assert_eq!(comp["pass"], Value::Bool(true));
}

#[test]
fn curve_csv_conserves_the_first_integral() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let out = forge(&["curve", "--c", "0", "--A", "2", "--h0", "1,1,1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == "K").unwrap();
    let mut max = 0.0_f64;
    for line in lines {
        max = max.max(line.split(',').nth(k).unwrap().parse::<f64>().unwrap().abs());
    }
    assert!(max <= 1e-10, "{max}");
}

#[test]
fn thread_cap_is_validated() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_darboux-forge"))
            .args(["bonnet", "--c", "1", "--trials", "10", "--constraint", "corrected"])
            .env("DARBOUX_FORGE_THREADS", value)
            .output()
            .unwrap()
    };
    let single = run("1");
    let auto = run("0");
    assert_eq!(single.stdout, auto.stdout);
    assert_eq!(code(&run("many")), 2);
}
