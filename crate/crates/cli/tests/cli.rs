use std::process::{Command, Output};

use serde_json::Value;

fn fqgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqgraph")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn field_summary_and_errors() {
    let out = fqgraph(&["field", "--p", "3", "--r", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["field"]["q"], 9);
    assert_eq!(v["field"]["nonzero_squares"], 4);
    assert_eq!(v["config"]["p"], 3);

    let out = fqgraph(&["field", "--p", "4", "--r", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    assert_eq!(code(&fqgraph(&["field", "--q", "12"])), 2);
    assert_eq!(code(&fqgraph(&["field", "--bogus"])), 2);
}

#[test]
fn form_sphere_table() {
    let out = fqgraph(&["form", "--q", "5", "--kind", "plus_even", "--dim", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    // 2xy = a has q − 1 solutions for a ≠ 0 and 2q − 1 for a = 0.
    let counts: Vec<u64> = v["form"]["sphere_table"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![9, 4, 4, 4, 4]);
    assert_eq!(code(&fqgraph(&["form", "--q", "5", "--kind", "nonsense", "--dim", "2"])), 2);
}

#[test]
fn graph_families() {
    let out = fqgraph(&["graph", "--family", "euclidean", "--q", "5", "--d", "2", "--kind", "plus_even", "--a", "1", "--certify"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["certificate"]["pass"], true);
    assert_eq!(v["certificate"]["n"], 25);

    let v = json(&fqgraph(&["graph", "--family", "halfplane", "--q", "7", "--a", "1"]));
    assert_eq!((v["certificate"]["n"].as_u64(), v["certificate"]["d"].as_u64()), (Some(42), Some(8)));
    assert!(v["certificate"]["lambda"].as_f64().unwrap() <= 2.0 * 7f64.sqrt() + 1e-6);

    let v = json(&fqgraph(&["graph", "--family", "bch", "--k", "3"]));
    assert_eq!(v["graph"]["n"], 64);
    assert_eq!(v["degree"], 7);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 64 * 7 / 2);

    let v = json(&fqgraph(&["graph", "--family", "orthogonal", "--q", "5", "--ortho", "odd_theta", "--m", "1", "--i", "2"]));
    assert_eq!(v["graph"]["n"], 10);

    let out = fqgraph(&["graph", "--family", "alon", "--k", "2", "--format", "adjacency"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 64);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 3));

    assert_eq!(code(&fqgraph(&["graph", "--family", "euclidean", "--q", "5"])), 2);
    assert_eq!(code(&fqgraph(&["graph", "--family", "alon", "--k", "3"])), 2);
}

#[test]
fn graph_output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let args = ["graph", "--family", "halfplane", "--q", "5", "--a", "2", "--output", p];
    assert_eq!(code(&fqgraph(&args)), 0);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(code(&fqgraph(&args)), 0);
    assert_eq!(first, std::fs::read(&path).unwrap());
}

#[test]
fn ramsey_witnesses() {
    let v = json(&fqgraph(&["ramsey", "--q", "17"]));
    assert_eq!(v["witness"]["n"], 289);
    assert_eq!(v["witness"]["triangle_count"], 0);
    let statement = v["witness"]["ramsey_statement"].as_str().unwrap();
    assert!(statement.starts_with("R(3, ") && statement.ends_with(") > 289"));

    let out = fqgraph(&["ramsey", "--q", "13"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("12"));

    let v = json(&fqgraph(&["ramsey", "--q", "5", "--exact-alpha"]));
    assert_eq!(v["witness"]["alpha_kind"], "exact");
    assert_eq!(v["witness"]["alpha_value"], 10);

    // The q = 7 plane graph has triangles: a check failure, not a usage error.
    assert_eq!(code(&fqgraph(&["ramsey", "--q", "7"])), 1);
}

#[test]
fn distance_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    let cfg = r#"{"space": {"kind": "euclidean", "q": 5, "d": 2, "form": "minus_even"},
                  "sizes": [3, 10, 25], "trials": 4, "seed": 9}"#;
    std::fs::write(&path, cfg).unwrap();
    let out = fqgraph(&["distance", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("space,q,d,size,trial,seed,delta_size,threshold,satisfied"));
    assert_eq!(lines.count(), 12);
    assert_eq!(csv, String::from_utf8(fqgraph(&["distance", "--config", path.to_str().unwrap()]).stdout).unwrap());

    let v = json(&fqgraph(&["distance", "--config", path.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["config"]["seed"], 9);

    assert_eq!(code(&fqgraph(&["distance", "--config", "/definitely/missing.json"])), 2);
    assert_eq!(code(&fqgraph(&["distance"])), 2);
}

#[test]
fn distance_exhaustive_table() {
    let out = fqgraph(&["distance", "--space", "halfplane", "--q", "5", "--exhaustive", "--max-size", "4"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 5);
    // Every pair of distinct points is at a nonzero distance, so two points give |Δ| = 2.
    assert!(csv.lines().nth(2).unwrap().starts_with("halfplane:sigma=2,5,2,2,190,2,2,190,"));
}

#[test]
fn suite_listing_and_exit_codes() {
    let out = fqgraph(&["suite", "--list"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 12);

    assert_eq!(code(&fqgraph(&["suite", "--only", "9"])), 0);
    assert_eq!(code(&fqgraph(&["suite", "--only", "9", "--corrupt"])), 1);
    assert_eq!(code(&fqgraph(&["suite", "--only", "13"])), 2);
}

#[test]
fn suite_json_is_reproducible_apart_from_timings() {
    let run = || {
        let mut v = json(&fqgraph(&["suite", "--only", "3,4", "--format", "json", "--seed", "5"]));
        v.as_object_mut().unwrap().remove("seconds");
        v
    };
    let a = run();
    assert_eq!(a["outcomes"].as_array().unwrap().len(), 2);
    assert_eq!(a, run());
}
