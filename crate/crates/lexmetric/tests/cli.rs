use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lexmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexmetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path: PathBuf = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const K2: &str = r#"{"points": ["x", "y"], "d": [[0, 1], [1, 0]]}"#;
const DISCRETE4: &str = r#"{"points": ["a", "b", "c", "d"],
  "d": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]}"#;

#[test]
fn path_has_dimension_one_with_endpoint_basis() {
    let dir = TempDir::new().unwrap();
    let p4 = write(dir.path(), "p4.edges", "a b\nb c\nc d\n");
    let out = lexmetric(&["--json", "dim", &p4]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["basis"], serde_json::json!(["a"]));
}

#[test]
fn all_bases_of_a_path_are_its_endpoints() {
    let dir = TempDir::new().unwrap();
    let p4 = write(dir.path(), "p4.edges", "a b\nb c\nc d\n");
    for extra in [&[][..], &["--enumeration"][..]] {
        let mut args = vec!["--json", "dim", &p4, "--all-bases"];
        args.extend_from_slice(extra);
        let v = json(&lexmetric(&args));
        assert_eq!(v["all_bases"], serde_json::json!([["a"], ["d"]]));
    }
}

#[test]
fn greedy_bound_is_reported() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "k4.json", DISCRETE4);
    let v = json(&lexmetric(&["--json", "dim", &f, "--greedy"]));
    assert_eq!(v["method"], "greedy");
    assert_eq!(v["size"], 3);
}

#[test]
fn dimension_check_on_k2_squared() {
    let dir = TempDir::new().unwrap();
    let k2 = write(dir.path(), "k2.json", K2);
    let out = lexmetric(&["--json", "verify", &k2, &k2, "--theorem", "dimension"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["theorem"], "dimension");
    assert_eq!(v["lhs"], 3);
    assert_eq!(v["rhs"], 3);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_all_reports_each_check() {
    let dir = TempDir::new().unwrap();
    let k2 = write(dir.path(), "k2.json", K2);
    let out = lexmetric(&["--json", "verify", &k2, &k2]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["theorem"].as_str().unwrap())
        .collect();
    assert!(names.starts_with(&["dimension", "diameter", "squash"]), "{names:?}");
}

#[test]
fn discrete_space_statistics() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "k4.json", DISCRETE4);
    let v = json(&lexmetric(&["--json", "stats", &f]));
    assert_eq!(v["nearness"], 1.0);
    assert_eq!(v["slack"], 1.0);
    assert_eq!(v["diameter"], 1.0);
}

#[test]
fn graph_output_reloads_as_a_metric() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "c5.edges", "# cycle\na b\nb c\nc d\nd e 2\ne a\n");
    let out = lexmetric(&["graph", &g]);
    assert_eq!(out.status.code(), Some(0));
    let table = write(dir.path(), "c5.json", &stdout(&out));
    let out = lexmetric(&["--json", "validate", &table]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], true);
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c5.json")).unwrap()).unwrap();
    assert_eq!(v["d"][0][3], 3.0);
}

#[test]
fn transforms_and_product_emit_tables() {
    let dir = TempDir::new().unwrap();
    let k2 = write(dir.path(), "k2.json", K2);
    let p = json(&lexmetric(&["product", &k2, &k2]));
    assert_eq!(p["points"], serde_json::json!(["x|x", "x|y", "y|x", "y|y"]));
    let g = json(&lexmetric(&["gravitate", &k2, "--t", "0.25"]));
    assert_eq!(g["d"][0][1], 0.5);
    let s = json(&lexmetric(&["squash", &k2, "--eta", "1"]));
    assert_eq!(s["d"][0][1], 0.5);
}

#[test]
fn twins_and_special_classes() {
    let dir = TempDir::new().unwrap();
    let k2 = write(dir.path(), "k2.json", K2);
    let v = json(&lexmetric(&["--json", "twins", &k2]));
    assert_eq!(v["twins_free"], false);
    let v = json(&lexmetric(&["--json", "special", &k2, &k2]));
    assert_eq!(v["classes"][0]["included"], true);
}

#[test]
fn invalid_metric_fails_validation() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "bad.json",
        r#"{"points": ["a", "b", "c"], "d": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}"#,
    );
    let out = lexmetric(&["validate", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("triangle"), "{}", stdout(&out));
}

#[test]
fn input_errors_exit_two_and_name_the_location() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "broken.json", "{\n  \"points\": [\"a\",\n}");
    let out = lexmetric(&["stats", &f]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("broken.json:3:"), "{err}");

    let e = write(dir.path(), "g.edges", "a b\nb c x\n");
    let err = String::from_utf8(lexmetric(&["stats", &e]).stderr).unwrap();
    assert!(err.contains("g.edges:2:"), "{err}");

    assert_eq!(lexmetric(&["stats"]).status.code(), Some(2));
    assert_eq!(lexmetric(&["gravitate", &f, "--t", "-1"]).status.code(), Some(2));
    assert_eq!(lexmetric(&["--help"]).status.code(), Some(0));
}

#[test]
fn guards_name_the_limit_and_cardinality() {
    let dir = TempDir::new().unwrap();
    let k4 = write(dir.path(), "k4.json", DISCRETE4);
    let out = lexmetric(&["verify", &k4, &k4, "--theorem", "dimension", "--max-product-points", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("max-product-points") && err.contains("16"), "{err}");

    let out = lexmetric(&["dim", &k4, "--all-bases", "--max-enumeration-points", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("max-enumeration-points") && err.contains('4'), "{err}");
}

#[test]
fn corpus_run_is_deterministic() {
    let a = lexmetric(&["--json", "corpus", "--seed", "11", "--count", "6"]);
    let b = lexmetric(&["--json", "corpus", "--seed", "11", "--count", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["failed"], 0);
}
