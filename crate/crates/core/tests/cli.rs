use clap::Parser;
use minitwistor::cli::curve_io::{curve_to_json, load_curve};
use minitwistor::cli::{execute, run, Cli, CliError, Outcome};
use serde_json::Value;

fn exec(args: &[&str]) -> Result<Outcome, CliError> {
    let mut full = vec!["minitwistor"];
    full.extend_from_slice(args);
    execute(&Cli::try_parse_from(full).expect("arguments parse"))
}

#[test]
fn info_text_and_json() {
    let out = exec(&["info"]).unwrap();
    assert_eq!(out.code, 0);
    for key in ["m = 2", "degree = 4", "genus = 1"] {
        assert!(out.stdout.contains(key), "{}", out.stdout);
    }
    let out = exec(&["info", "--curve", "charge3", "--format", "json"]).unwrap();
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["m"], 3);
    assert_eq!(v["degree"], 6);
    assert_eq!(v["genus"], 4);
}

#[test]
fn malformed_curve_file_names_the_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"m": 2, "alpha": [[[0,0],[0,0],[0,0]], [[1,0],[0,0],["x",0],[0,0],[1,0]]]}"#).unwrap();
    let err = exec(&["info", "--curve", path.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.code, 2);
    assert!(err.message.contains("alpha[1][2]"), "{}", err.message);
    let err = exec(&["info", "--curve", "charge2:k=1.5"]).unwrap_err();
    assert_eq!(err.code, 2);
    let err = exec(&["info", "--curve", "no-such-file.json"]).unwrap_err();
    assert_eq!(err.code, 2);
}

#[test]
fn grid_floor() {
    let dir = tempfile::tempdir().unwrap();
    let out = exec(&["trace", "--grid", "16", "--out", dir.path().to_str().unwrap()]).unwrap();
    assert_eq!(out.code, 0);
    assert!(!out.files.is_empty());
    assert_eq!(exec(&["trace", "--grid", "15"]).unwrap_err().code, 2);
}

#[test]
fn perturbed_curve_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let c = load_curve("charge2:k=0.8").unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, curve_to_json(&c)).unwrap();
    let out = exec(&["verify", "--curve", good.to_str().unwrap(), "--grid", "64"]).unwrap();
    assert_eq!(out.code, 0, "{:?}", out.warnings);

    let mut v: Value = serde_json::from_str(&curve_to_json(&c)).unwrap();
    let re = v["alpha"][1][0][0].as_f64().unwrap();
    v["alpha"][1][0][0] = Value::from(re * (1.0 + 1e-6));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let out = exec(&["verify", "--curve", bad.to_str().unwrap(), "--grid", "64"]).unwrap();
    assert_eq!(out.code, 4);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.iter().any(|n| n.ends_with(": reality")), "{failed:?}");
}

#[test]
fn incidence_at_a_point() {
    let out = exec(&["incidence", "--point", "0.5,-0.25,1"]).unwrap();
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let rec = &v[0];
    assert_eq!(rec["point"], serde_json::json!([0.5, -0.25, 1.0]));
    let total: u64 = rec["result"]["roots"].as_array().unwrap().iter().map(|r| r["multiplicity"].as_u64().unwrap()).sum::<u64>()
        + rec["result"]["at_infinity"].as_u64().unwrap();
    assert_eq!(total, 4);
    assert_eq!(exec(&["incidence", "--point", "1,2"]).unwrap_err().code, 2);
    assert_eq!(exec(&["incidence", "--point", "1,2,3", "--random", "3"]).unwrap_err().code, 2);
    let out = exec(&["incidence", "--random", "5", "--seed", "7"]).unwrap();
    let again = exec(&["incidence", "--random", "5", "--seed", "7"]).unwrap();
    assert_eq!(out.stdout, again.stdout);
    assert_eq!(serde_json::from_str::<Value>(&out.stdout).unwrap().as_array().unwrap().len(), 5);
}

#[test]
fn surface_and_edge_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = exec(&["surface", "--grid", "128", "--out", d]).unwrap();
    let names: Vec<String> = out.files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert!(names.contains(&"surface.obj".to_string()) && names.contains(&"curvature.csv".to_string()), "{names:?}");
    let obj = std::fs::read_to_string(dir.path().join("surface.obj")).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("v ")) && obj.lines().any(|l| l.starts_with("f ")));

    let out = exec(&["edge", "--grid", "128", "--out", d]).unwrap();
    for f in &out.files {
        assert!(f.exists());
    }
    let csv = std::fs::read_to_string(dir.path().join("edges.csv")).unwrap();
    assert!(csv.lines().count() > 10);

    let err = exec(&["surface", "--grid", "128", "--component", "99", "--out", d]).unwrap_err();
    assert_eq!(err.code, 2);
    assert_eq!(exec(&["surface", "--r-min", "2", "--r-max", "1"]).unwrap_err().code, 2);
}

#[test]
fn format_restricts_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = exec(&["trace", "--grid", "64", "--format", "svg", "--out", dir.path().to_str().unwrap()]).unwrap();
    assert!(out.files.iter().all(|p| p.extension().unwrap() == "svg"), "{:?}", out.files);
}

#[test]
fn run_reports_exit_codes() {
    assert_eq!(run(["minitwistor", "no-such-command"]), 2);
    assert_eq!(run(["minitwistor", "info", "--grid", "x"]), 2);
    assert_eq!(run(["minitwistor", "info"]), 0);
}
