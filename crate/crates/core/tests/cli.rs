use std::process::{Command, Output};

use serde_json::Value;

fn shcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shcalc")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = shcalc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn exit_codes() {
    assert_eq!(shcalc(&["compute", "--m", "2", "--n", "1"]).status.code(), Some(0));
    assert_eq!(shcalc(&["compute", "--m", "3", "--n", "5"]).status.code(), Some(2));
    assert_eq!(shcalc(&["compute", "--m", "0", "--n", "1"]).status.code(), Some(3));
    assert_eq!(shcalc(&["compute", "--m", "2"]).status.code(), Some(3));
    assert_eq!(shcalc(&["compute", "--m", "2", "--n", "1", "--field", "gf3"]).status.code(), Some(3));
    assert_eq!(shcalc(&["--help"]).status.code(), Some(0));
}

#[test]
fn unsupported_reports_on_stderr() {
    let out = shcalc(&["compute", "--m", "4", "--n", "7"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn tau_counts_subsets() {
    let v = json(&["tau", "--n", "3"]);
    assert_eq!(v["coeffs"], serde_json::json!(["2", "5", "2"]));
    let v = json(&["tau", "--n", "4", "--field", "gf2"]);
    assert_eq!(v["field"], "gf2");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
}

#[test]
fn localization_is_weight_independent() {
    let v = json(&["localize", "--m", "4", "--n", "3", "--a", "1", "--trials", "5", "--seed", "7"]);
    assert_eq!(v["weight_independent"], true);
    assert_eq!(v["integral"], true);
    for x in v["values"].as_array().unwrap() {
        assert_eq!(x, &v["closed_form"]);
    }
}

#[test]
fn text_format() {
    let out = shcalc(&["compute", "--m", "2", "--n", "1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("SH = Λ[ω]/(ω^2 + 1*t^1)"));
    assert!(text.contains("rank SH = 2"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn rmatrix_marks_unknowns() {
    let v = json(&["rmatrix", "--m", "2", "--n", "1"]);
    assert_eq!(v["r_matrix"][1][0], "1*t^1");
    assert_eq!(v["r_matrix"][0][1], "-1");
    let v = json(&["rmatrix", "--m", "3", "--n", "3"]);
    assert!(!v["r_unknown"].as_array().unwrap().is_empty());
    assert!(v["r_matrix"].to_string().contains("\"?\""));
}

#[test]
fn table_passes_every_diagnostic() {
    let v = json(&["table", "--max-m", "4"]);
    let rows = v.as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        assert_eq!(row["diagnostics_pass"], true, "{row}");
    }
}

#[test]
fn same_seed_same_output() {
    let a = shcalc(&["compute", "--m", "4", "--n", "4", "--seed", "11"]);
    let b = shcalc(&["compute", "--m", "4", "--n", "4", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn grr_numbers() {
    let v = json(&["grr"]);
    assert_eq!(v["chi_structure_sheaf"], "1");
    assert_eq!(v["deg_obs"], 1);
}
