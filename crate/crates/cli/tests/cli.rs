use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_orbifold"));
    c.env_remove("ORBIFOLD_OUT_DIR");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn classify_nine_one_two() {
    let v = json(&["classify", "1/9(1,2)"]);
    assert_eq!(v["is_type_t"], true);
    assert_eq!(v["witness"], serde_json::json!([1, 3, 1]));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn classify_many_and_strict() {
    let v = json(&["classify", "1/5(1,4)", "1/5(1,2)", "1/4(1,1)"]);
    let r = v["results"].as_array().unwrap();
    assert_eq!(r[0]["witness"], "A4");
    assert_eq!(r[1]["is_type_t"], false);
    assert_eq!(r[2]["witness"], serde_json::json!([1, 2, 1]));
    assert_eq!(run(&["classify", "1/5(1,2)", "--strict"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "1/5(1,4)", "--strict"]).status.code(), Some(0));
}

#[test]
fn enumerate_degree_four_is_a1_only() {
    let o = run(&["enumerate", "--degree", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 1, "{text}");
    assert!(rows[0].starts_with("A1 "));
}

#[test]
fn enumerate_as_json() {
    let v = json(&["enumerate", "--degree", "3", "--format", "json"]);
    let labels: Vec<&str> = v["singularities"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["A1", "A2"]);
}

#[test]
fn fubini_study_scan_has_equal_negative_pair() {
    let o = run(&["curvature-scan", "--chart", "fubini-study", "--samples", "6"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    let col = |n: &str| header.iter().position(|h| h == n).unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        let (l1, l2, l3) = (r[col("lambda1")], r[col("lambda2")], r[col("lambda3")]);
        assert!(l1 < 0.0 && l2 < 0.0 && l3 > 0.0);
        assert!((l1 - l2).abs() < 1e-6 * l3);
        assert!((l3 + l1 + l2).abs() < 1e-6 * l3);
        assert!(r[col("det_wplus")] > 0.0);
    }
}

#[test]
fn curvature_scan_from_config() {
    let cfg = data("bumpy_chart.json");
    let o = run(&["curvature-scan", "--config", cfg.to_str().unwrap(), "--samples", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chart"], "bumpy");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = ["curvature-scan", "--chart", "round-s4", "--samples", "5", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other = run(&["curvature-scan", "--chart", "round-s4", "--samples", "5", "--seed", "12"]);
    assert_ne!(run(&args).stdout, other.stdout);
    let plan = data("eh_flat.json");
    let g = ["glue-scan", plan.to_str().unwrap(), "--format", "json"];
    assert_eq!(run(&g).stdout, run(&g).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "1/9(1,2"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--spec", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "1/4(2,1)"]).status.code(), Some(3));
    assert_eq!(run(&["enumerate", "--degree", "6"]).status.code(), Some(3));
    assert_eq!(run(&["curvature-scan", "--chart", "nowhere"]).status.code(), Some(2));
    let spec = data("cp2_z5.json");
    assert_eq!(run(&["check", "--spec", spec.to_str().unwrap(), "--c1sq", "1"]).status.code(), Some(0));
    assert_eq!(run(&["check", "--spec", spec.to_str().unwrap(), "--c1sq", "1", "--strict"]).status.code(), Some(1));
}

#[test]
fn check_cp2_family_has_one_type_t_point() {
    let v = json(&["check", "--family", "cp2:11"]);
    let points = v["verdict"]["per_singularity"].as_array().unwrap();
    assert_eq!(points.iter().filter(|p| p["type_t"]["is_type_t"] == true).count(), 1);
    assert_eq!(v["verdict"]["overall"], false);
}

#[test]
fn invariants_of_z2_quotient() {
    let v = json(&["invariants", "--family", "cp1xcp1:2", "--c1sq", "4", "--strict"]);
    assert_eq!(v["report"]["euler"], 8);
    assert_eq!(v["report"]["signature"], -4);
    assert_eq!(v["report"]["c1sq"], 4);
    assert_eq!(v["diffeotype"], "CP2#5-CP2");
}

#[test]
fn invariants_with_partial_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    std::fs::write(&a, r#"{"0": {"bubble": {"asymptotic_group": "A1", "b2": 1, "euler": 2, "signature": -1,
        "pi1_order": 1, "intersection_matrix": [[-2]], "singular_points": []}}}"#)
        .unwrap();
    let o = run(&["invariants", "--family", "cp1xcp1:2", "--assignment", a.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["euler"], 5);
    assert_eq!(v["report"]["remaining_singularities"].as_array().unwrap().len(), 3);
}

#[test]
fn out_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/scan.csv");
    let plan = data("eh_flat.json");
    let o = run(&["glue-scan", plan.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header[..5], ["t", "ring_factor", "radius", "metric_deviation", "eigen_deviation"]);
    assert_eq!(rows.len(), 9);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nested/scan.csv.summary.json")).unwrap()).unwrap();
    assert!((summary["fitted_exponent"].as_f64().unwrap() - 1.0).abs() < 0.1);
    assert_eq!(summary["monotone"], true);
    let names: Vec<_> = std::fs::read_dir(dir.path().join("nested")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "stray files: {names:?}");
}

#[test]
fn env_directory_sets_default_target() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().env("ORBIFOLD_OUT_DIR", dir.path()).args(["enumerate", "--degree", "2"]).output().unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("enumerate.txt")).unwrap();
    assert!(text.lines().nth(2).unwrap().starts_with("A1"));
    let o = bin().env("ORBIFOLD_OUT_DIR", dir.path()).args(["classify", "E6", "--out", "e6.json"]).output().unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("e6.json")).unwrap()).unwrap();
    assert_eq!(v["witness"], "E6");
}

#[test]
fn norm_verbs() {
    let spec = data("orbifold_norm.json");
    let s = spec.to_str().unwrap();
    let zero = json(&["norm", "--field", "zero", "--spec", s]);
    assert_eq!(zero["norm"]["value"], 0.0);
    assert_eq!(zero["kind"], "weighted");
    // ρ^β has weighted C⁰ part 1 under the ρ^{-β} weight.
    let v = json(&["norm", "--field", "rho^1.5", "--spec", s]);
    assert!(v["norm"]["value"].as_f64().unwrap() >= 1.0 - 1e-12);
    assert_eq!(run(&["norm", "--field", "annulus-constant", "--spec", s]).status.code(), Some(3));
    assert_eq!(run(&["norm", "--field", "zero", "--spec", s, "--double-starred", "0.1"]).status.code(), Some(2));
}

#[test]
fn starred_norm_absorbs_annulus_constant() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"k": 0, "alpha": 0.5, "beta": 1.0, "geometry": {"kind": "orbifold"},
            "grid": {"radii": [0.002, 0.005, 0.01, 0.02, 0.04], "direction_pairs": 6, "seed": 2}}"#,
    )
    .unwrap();
    let v = json(&["norm", "--field", "annulus-constant", "--spec", spec.to_str().unwrap(), "--annulus", "1e-8,0.2"]);
    assert_eq!(v["kind"], "starred");
    let raw = v["norm"]["raw"]["value"].as_f64().unwrap();
    let residual = v["norm"]["residual"]["value"].as_f64().unwrap();
    assert!(raw > 0.0 && residual < 1e-9 * raw, "{residual} vs {raw}");
}

#[test]
fn indicial_checks_pass_strictly() {
    let v = json(&["indicial", "--strict"]);
    assert_eq!(v["passed"], true);
    assert!(v["pairs"].as_array().unwrap().iter().any(|p| p["cross_degree"] == true));
}
