use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qw1d_cli::{parse_spec_str, parse_state, CliError};
use qw1d_core::canonical::CanonicalForm;
use qw1d_core::{CoeffSite, Tolerances, WalkError, WalkSpec};
use serde_json::{json, Value};
use tempfile::TempDir;

fn qw1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qw1d")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, doc: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(doc).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ti(r: f64) -> Value {
    let site = json!({"r": r, "a": 0.0, "b": 0.0, "c": 0.0, "d": PI});
    json!({"left_tail": site, "right_tail": site})
}

fn hadamard_vectors() -> Value {
    let h = FRAC_1_SQRT_2;
    let site = json!({
        "xi_right": [[1.0, 0.0], [0.0, 0.0]],
        "xi_left": [[0.0, 0.0], [1.0, 0.0]],
        "zeta_to_left": [[h, 0.0], [h, 0.0]],
        "zeta_to_right": [[h, 0.0], [-h, 0.0]]
    });
    json!({"left_tail": site, "right_tail": site})
}

#[test]
fn minimal_ti_file() {
    let parsed = parse_spec_str(&ti(0.6).to_string(), &Tolerances::default()).unwrap();
    assert!(parsed.spec.exceptions.is_empty());
    assert_eq!(parsed.spec.left_tail.r(), 0.6);
    assert!(parsed.frames.is_none() && parsed.state.is_none());
}

#[test]
fn vector_form_hadamard() {
    let parsed = parse_spec_str(&hadamard_vectors().to_string(), &Tolerances::default()).unwrap();
    let site = parsed.spec.right_tail;
    assert!((site.r() - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!(site.d().approx_eq(qw1d_core::Phase::PI, 1e-12));
    assert!(parsed.frames.is_some());
}

#[test]
fn constraint_violation_is_a_validation_error() {
    let mut doc = ti(0.6);
    doc["exceptions"] = json!({"3": {"r": 0.5, "a": 0.0, "b": 0.0, "c": 0.0, "d": 1.0}});
    let err = parse_spec_str(&doc.to_string(), &Tolerances::default()).unwrap_err();
    match &err {
        CliError::Validation { field, source: WalkError::PhaseConstraintViolation { .. } } => {
            assert_eq!(field, "exceptions.3")
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(err.to_string().contains("phase constraint"));
}

#[test]
fn syntax_and_field_errors_carry_position() {
    let tol = Tolerances::default();
    let err = parse_spec_str("{\n  \"left_tail\": {\"r\": 0.5,,}\n}", &tol).unwrap_err();
    assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err:?}");

    let err = parse_spec_str(r#"{"left_tail": {"r": 0.5, "a": 0, "b": 0, "c": 0}, "right_tail": {}}"#, &tol).unwrap_err();
    assert!(err.to_string().contains("missing field `d`"), "{err}");
}

#[test]
fn coefficient_round_trip_is_exact() {
    let spec = WalkSpec::two_phase_defect(
        CoeffSite::from_abc(0.3, 0.1, 2.0, 4.0).unwrap(),
        CoeffSite::from_abc(0.9, 5.5, 0.25, 1.0).unwrap(),
        CoeffSite::from_abc(0.123456789, 1.0 / 3.0, 2.0f64.sqrt(), 0.7).unwrap(),
    )
    .with_site(-4, CoeffSite::from_abc(0.5, 6.0, 0.0, 3.0).unwrap());
    let text = serde_json::to_string(&spec).unwrap();
    let back = parse_spec_str(&text, &Tolerances::default()).unwrap();
    assert_eq!(back.spec, spec);
}

#[test]
fn state_strings() {
    let phi = parse_state("1,0").unwrap();
    assert_eq!(phi.0[0].re, 1.0);
    let phi = parse_state("0.6+0i, 0-0.8i").unwrap();
    assert_eq!(phi.0[1].im, -0.8);
    assert!(parse_state("1").is_err());
    assert!(parse_state("1,x").is_err());
}

#[test]
fn equiv_identical_ti() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &ti(0.6));
    let out = qw1d(&["equiv", "--a", s(&a), "--b", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["equivalent"], json!(true));
}

#[test]
fn equiv_different_radii() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &ti(0.6));
    let b = write(&dir, "b.json", &ti(0.8));
    assert_eq!(qw1d(&["equiv", "--a", s(&a), "--b", s(&b)]).status.code(), Some(1));
    assert_eq!(qw1d(&["equiv", "--a", s(&a), "--b", s(&b), "--oracle"]).status.code(), Some(1));
}

#[test]
fn equiv_error_exits_2() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &ti(0.6));
    let missing = dir.path().join("missing.json");
    let out = qw1d(&["equiv", "--a", s(&a), "--b", s(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn simulate_hadamard() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "h.json", &ti(FRAC_1_SQRT_2));
    let csv = dir.path().join("dist.csv");
    let out = qw1d(&["simulate", "--in", s(&spec), "--state", "1,0", "--steps", "2", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,site,probability"));
    let last: Vec<(i64, f64)> = lines
        .filter(|l| l.starts_with("2,"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(last.iter().map(|x| x.0).collect::<Vec<_>>(), [-2, 0, 2]);
    for ((_, p), want) in last.iter().zip([0.25, 0.5, 0.25]) {
        assert!((p - want).abs() < 1e-12);
    }
}

#[test]
fn canonicalize_writes_gauge() {
    let dir = TempDir::new().unwrap();
    let mut doc = hadamard_vectors();
    doc["state"] = json!([[0.0, 0.0], [0.0, 1.0]]);
    let spec = write(&dir, "h.json", &doc);
    let gauge = dir.path().join("g.json");
    let out = qw1d(&["canonicalize", "--in", s(&spec), "--gauge", s(&gauge)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], json!("TI"));
    assert_eq!(v["state"]["alpha"], json!(0.0));
    let form: CanonicalForm = serde_json::from_value(json!({"class": v["class"], "params": v["params"]})).unwrap();
    assert!((form.radii()[0] - FRAC_1_SQRT_2).abs() < 1e-15);

    let g: Value = serde_json::from_str(&std::fs::read_to_string(&gauge).unwrap()).unwrap();
    assert!(g["lambda"].is_f64());
    assert!(g["u"]["0"].is_f64() && g["v"]["-3"].is_f64());
    assert!(g["frames"]["0"].is_array());
}

#[test]
fn explicit_class_precondition() {
    let dir = TempDir::new().unwrap();
    let mut doc = ti(0.6);
    doc["exceptions"] = json!({"2": {"r": 0.3, "a": 0.0, "b": 0.0, "c": 0.0, "d": PI}});
    let spec = write(&dir, "g.json", &doc);
    let out = qw1d(&["canonicalize", "--in", s(&spec), "--class", "TI"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qw1d(&["classify", "--in", s(&spec)]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "General");
    let out = qw1d(&["canonicalize", "--in", s(&spec), "--class", "auto", "--window", "4"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["params"]["theta"]["0"], json!(0.0));
    assert_eq!(v["params"]["theta"]["1"], json!(0.0));
}

#[test]
fn commutant_lists_two_symmetries() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "t.json", &ti(0.6));
    let out = qw1d(&["commutant", "--in", s(&spec), "--window", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn commutant_of_shift_needs_flag() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", &ti(1.0));
    assert_eq!(qw1d(&["commutant", "--in", s(&spec), "--window", "3"]).status.code(), Some(2));
    let out = qw1d(&["commutant", "--in", s(&spec), "--window", "3", "--allow-degenerate"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().len() > 2);
}

#[test]
fn tolerance_env_override() {
    let dir = TempDir::new().unwrap();
    let mut doc = ti(0.6);
    doc["left_tail"]["d"] = json!(PI + 1e-7);
    let spec = write(&dir, "t.json", &doc);
    assert_eq!(qw1d(&["classify", "--in", s(&spec)]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qw1d"))
        .args(["classify", "--in", s(&spec)])
        .env("QW1D_TOLERANCE_PHASE", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
