use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qframe::frame::born_frame;
use qframe::io::{parse, FrameSamplesJson, MatrixJson};
use qframe::operator::{DensityOperator, HermitianOperator};
use qframe::random;

fn qframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qframe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_trine_forbids_everything_above_one() {
    let out = qframe(&["analyze", "--name", "trine", "--lmax", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    for row in rows {
        let l = row["l"].as_u64().unwrap();
        assert_eq!(row["allowed"].as_bool().unwrap(), l <= 1, "l = {l}");
    }
}

#[test]
fn analyze_text_report() {
    let out = qframe(&["analyze", "--name", "trine", "--lmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().nth(2).unwrap().starts_with("   0      8.46284e-1       yes"));
    assert_eq!(text.lines().last().unwrap(), "allowed: 0, 1");
}

#[test]
fn analyze_incomplete_set_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        r#"{"kind": "vector_set", "vectors": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}"#,
    );
    let out = qframe(&["analyze", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("completeness violated"), "{}", stderr(&out));
}

#[test]
fn analyze_reports_failing_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", r#"{"kind": "vector_set", "vectors": [[1, 0, "x"]]}"#);
    let out = qframe(&["analyze", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("vectors[0]"), "{}", stderr(&out));
}

#[test]
fn analyze_file_input_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let set = qframe(&["catalog", "--name", "tet2", "--format", "json"]);
    assert_eq!(set.status.code(), Some(0));
    let path = write(dir.path(), "tet2.json", &stdout(&set));
    let from_file = qframe(&["analyze", "--input", &path, "--lmax", "6", "--format", "json"]);
    let builtin = qframe(&["analyze", "--name", "tet2", "--lmax", "6", "--format", "json"]);
    let allowed = |out: &Output| -> Vec<bool> {
        let report: serde_json::Value = serde_json::from_str(&stdout(out)).unwrap();
        report["rows"].as_array().unwrap().iter().map(|r| r["allowed"].as_bool().unwrap()).collect()
    };
    // Reading the file renormalizes the vectors, so only the classification is compared.
    assert_eq!(allowed(&from_file), allowed(&builtin));
    let report: serde_json::Value = serde_json::from_str(&stdout(&builtin)).unwrap();
    assert_eq!(report["rows"][5]["allowed"], true);
    assert_eq!(report["rows"][3]["allowed"], false);
}

#[test]
fn table_text_and_json() {
    let text = qframe(&["table", "--lmax", "17"]);
    assert_eq!(text.status.code(), Some(0));
    let body = stdout(&text);
    assert_eq!(body.lines().count(), 7);
    assert!(body.contains("tetrahedron"));

    let json = qframe(&["table", "--lmax", "17", "--format", "json"]);
    let table: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row["matches_reference"], true, "{}", row["solid"]);
        assert!(row["evidence"].as_object().unwrap().len() == 18);
    }

    let small = qframe(&["table", "--lmax", "5", "--format", "json"]);
    let table: serde_json::Value = serde_json::from_str(&stdout(&small)).unwrap();
    assert_eq!(table["rows"][0]["allowed"], serde_json::json!([0, 1, 2, 5]));
}

#[test]
fn reconstruct_roundtrip_from_mixed_state() {
    let dir = tempfile::tempdir().unwrap();
    let f = born_frame(DensityOperator::maximally_mixed(2));
    let input = write(
        dir.path(),
        "samples.json",
        &serde_json::to_string(&FrameSamplesJson::from_oracle(&f)).unwrap(),
    );
    let output = dir.path().join("w.json");
    let out = qframe(&["reconstruct", "--input", &input, "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let w = parse::<MatrixJson>(&fs::read_to_string(&output).unwrap())
        .unwrap()
        .to_operator("$")
        .unwrap();
    let half = &HermitianOperator::identity(2) * 0.5;
    assert!((&w - &half).max_abs() <= 1e-10);
}

#[test]
fn reconstruct_roundtrip_from_samples_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.json");
    let out = qframe(&["samples", "--dim", "3", "--seed", "11", "--output", samples.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = qframe(&["reconstruct", "--input", samples.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let w = parse::<MatrixJson>(&stdout(&out)).unwrap().to_operator("$").unwrap();
    let expected = random::density(3, &mut random::rng(11));
    assert!((&w - expected.op()).hs_norm() <= 1e-10);
}

#[test]
fn reconstruct_rejects_incomplete_and_inconsistent_samples() {
    let dir = tempfile::tempdir().unwrap();
    let w = random::density(2, &mut random::rng(5));
    let samples = FrameSamplesJson::from_oracle(&born_frame(w));

    let mut short = samples.clone();
    short.samples.pop();
    let path = write(dir.path(), "short.json", &serde_json::to_string(&short).unwrap());
    let out = qframe(&["reconstruct", "--input", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing"), "{}", stderr(&out));

    // The identity sample fixes the trace; raising it breaks normalization.
    let mut bumped = samples;
    bumped.samples[0].value += 0.2;
    let path = write(dir.path(), "bumped.json", &serde_json::to_string(&bumped).unwrap());
    let out = qframe(&["reconstruct", "--input", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("trace"), "{}", stderr(&out));
}

#[test]
fn decompose_effect_file() {
    let dir = tempfile::tempdir().unwrap();
    let e = HermitianOperator::from_real_diagonal(&[0.2, 0.7]);
    let path = write(
        dir.path(),
        "e.json",
        &serde_json::to_string(&MatrixJson::from_operator(&e)).unwrap(),
    );
    let out = qframe(&["decompose", "--input", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let dec: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let weights: Vec<f64> = dec["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["weight"].as_f64().unwrap())
        .collect();
    assert_eq!(weights.len(), 3);
    assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);

    let bad = write(
        dir.path(),
        "bad.json",
        &serde_json::to_string(&MatrixJson::from_operator(&HermitianOperator::from_real_diagonal(&[1.5, 0.0])))
            .unwrap(),
    );
    assert_eq!(qframe(&["decompose", "--input", &bad]).status.code(), Some(2));
}

#[test]
fn validate_povm_and_vector_set() {
    let dir = tempfile::tempdir().unwrap();
    let povm = random::povm(3, 4, &mut random::rng(2));
    let path = write(
        dir.path(),
        "povm.json",
        &serde_json::to_string(&qframe::io::PovmJson::from_povm(&povm)).unwrap(),
    );
    let out = qframe(&["validate", "--input", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("valid POVM: dim = 3, outcomes = 4"));

    let mut broken = qframe::io::PovmJson::from_povm(&povm);
    broken.effects.pop();
    let path = write(dir.path(), "broken.json", &serde_json::to_string(&broken).unwrap());
    assert_eq!(qframe(&["validate", "--input", &path]).status.code(), Some(2));

    let set = write(dir.path(), "set.json", &stdout(&qframe(&["catalog", "--name", "cube", "--format", "json"])));
    let out = qframe(&["validate", "--input", &set, "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["outcomes"], 8);
    assert_eq!(report["dim"], 2);
}

#[test]
fn catalog_lists_and_emits() {
    let list = stdout(&qframe(&["catalog"]));
    assert_eq!(list.lines().count(), qframe::catalog::NAMES.len());
    let out = qframe(&["catalog", "--name", "polygon", "--n", "5", "--format", "json"]);
    let set: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(set["vectors"].as_array().unwrap().len(), 5);
    assert_eq!(qframe(&["catalog", "--name", "heptagon"]).status.code(), Some(2));
    assert_eq!(qframe(&["catalog", "--name", "polygon"]).status.code(), Some(2));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(qframe(&["analyze", "--name", "trine", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(qframe(&["analyze", "--name", "trine", "--lmax", "0"]).status.code(), Some(2));
    assert_eq!(qframe(&["analyze"]).status.code(), Some(2));
    assert_eq!(qframe(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qframe(&["reconstruct", "--input", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let runs = [
        vec!["analyze", "--name", "icosahedron", "--lmax", "16", "--format", "json"],
        vec!["table", "--format", "json"],
        vec!["samples", "--dim", "4", "--seed", "3"],
    ];
    for args in &runs {
        let a = qframe(args);
        let b = qframe(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
