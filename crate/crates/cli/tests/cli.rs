use std::path::PathBuf;
use std::process::{Command, Output};

fn owc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_owc")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn trees_writes_one_line_per_diagram() {
    for (dim, size, lines) in [("1", "5", 3), ("0", "1", 1), ("2", "7", owc_core::oracle::oracle_shapes(2, 7).len())] {
        let path = tmp(&format!("trees-{dim}-{size}.jsonl"));
        let out = owc(&["trees", "--dim", dim, "--max-size", size, "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), lines);
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), format!("{lines} diagrams"));
    }
}

#[test]
fn build_initial_prints_counts() {
    let out = owc(&["build-initial", "--dim", "0"]);
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l == "dim 0: 1"));
    let out = owc(&["build-initial", "--dim", "1", "--max-arity-size", "5", "--max-term-size", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "dim 1: 4"), "{text}");
}

#[test]
fn build_initial_document_shape() {
    let path = tmp("initial-1-5-1.json");
    let out = owc(&["build-initial", "--dim", "1", "--max-term-size", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["stage"], serde_json::json!([1, 1]));
    assert_eq!(v["cells"][1]["cells"].as_array().unwrap().len(), 4);
    for key in ["bounds", "mult", "gamma", "log"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_exit_codes() {
    assert!(owc(&["verify"]).status.success());
    let out = owc(&["verify", "--suite", "globularity", "--input", &fixture("corrupted_globset.json")]);
    assert_eq!(out.status.code(), Some(1));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["pass"], false);
    assert_eq!(reports[0]["violations"].as_array().unwrap().len(), 1);
    assert_eq!(owc(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(owc(&["verify", "--suite", "operad-laws", "--input", &fixture("bad_arity.json")]).status.code(), Some(2));
    let out = owc(&["verify", "--suite", "contraction-laws", "--suite", "stability-operad", "--max-term-size", "1", "--input", &fixture("loops.json")]);
    assert!(out.status.success());
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);
}
