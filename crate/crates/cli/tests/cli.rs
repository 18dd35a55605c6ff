use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgla"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let report = serde_json::from_str(&text).unwrap_or(Value::Null);
    (report, out.status.code().expect("exit code"), text)
}

#[test]
fn manifest_cases() {
    let manifest: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(root().join("fixtures/manifest.json")).unwrap()).unwrap();
    assert!(manifest.len() > 30);
    let mut failures = Vec::new();
    for case in &manifest {
        let args: Vec<&str> = case["args"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap())
            .collect();
        let (report, code, text) = run(&args);
        if report["status"] != case["status"] || i64::from(code) != case["exit"].as_i64().unwrap() {
            failures.push(format!("{args:?}: exit {code}\n{text}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn validate_obstructed() {
    let (r, code, _) = run(&["validate", "fixtures/obstructed.dgla.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    for axiom in ["d-squared", "skew-symmetry", "jacobi", "leibniz"] {
        assert_eq!(r["payload"]["axioms"][axiom], true, "{axiom}");
    }
}

#[test]
fn lift_obstructed_reports_half_f_at_t_squared() {
    let (r, code, _) = run(&[
        "lift",
        "fixtures/obstructed.dgla.json",
        "--algebra",
        "t^3",
        "--element",
        "fixtures/et.elem.json",
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "obstructed");
    let class = &r["payload"]["class"];
    assert_eq!(class["degree"], 2);
    assert_eq!(class["ideal_labels"], serde_json::json!(["t^2"]));
    assert_eq!(class["components"], serde_json::json!([["1/2"]]));
    assert_eq!(class["basis"], serde_json::json!(["f"]));
}

#[test]
fn triangle_transfer_from_bottom() {
    let (r, code, _) = run(&[
        "bicomplex",
        "transfer",
        "fixtures/triangle.bix.json",
        "--from",
        "bottom",
        "--degree",
        "1",
        "--class",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    let coords = r["payload"]["class"]["coordinates"].as_array().unwrap();
    assert_eq!(coords.len(), 1);
    assert_ne!(coords[0], "0");
    let trace = &r["payload"]["trace"];
    assert_eq!(trace["direction"], "bottom-to-left");
    assert_eq!(trace["steps"].as_array().unwrap().len(), 1);
    assert_eq!(trace["output"], r["payload"]["class"]);
}

#[test]
fn transfer_round_trip_through_cli() {
    let (r, _, _) = run(&[
        "bicomplex",
        "transfer",
        "fixtures/tetrahedron.bix.json",
        "--from",
        "bottom",
        "--degree",
        "2",
        "--class",
        "3/2",
    ]);
    let c = r["payload"]["class"]["coordinates"][0].as_str().unwrap().to_string();
    let (back, code, _) = run(&[
        "bicomplex",
        "transfer",
        "fixtures/tetrahedron.bix.json",
        "--from",
        "left",
        "--degree",
        "2",
        "--class",
        &c,
    ]);
    assert_eq!(code, 0);
    assert_eq!(back["payload"]["class"]["coordinates"], serde_json::json!(["3/2"]));
}

#[test]
fn parse_errors_point_at_the_field() {
    let (r, code, _) = run(&["validate", "fixtures/bad_shape.dgla.json"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "invalid-input");
    assert_eq!(r["payload"]["path"], "differential[0][0]");

    let dir = std::env::temp_dir().join(format!("dgla-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("typo.dgla.json");
    std::fs::write(
        &bad,
        r#"{"degrees":[1],"dims":[1],"differential":[],"bracket":[[1,0,1,0,0,"1/0"]]}"#,
    )
    .unwrap();
    let (r, code, _) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["payload"]["path"], "bracket[0][5]");

    std::fs::write(
        &bad,
        r#"{"degrees":[1],"dims":[1],"differential":[],"bracket":[],"colour":1}"#,
    )
    .unwrap();
    let (r, code, _) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r["payload"]["error"].as_str().unwrap().contains("colour"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_command_is_malformed_input() {
    let (r, code, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "invalid-input");
}

#[test]
fn selftest_reports_are_byte_identical() {
    let (r, code, first) = run(&["selftest", "--seed", "0", "--profile", "small"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["passed"], true);
    let (_, _, second) = run(&["selftest", "--seed", "0", "--profile", "small"]);
    assert_eq!(first, second);
}

#[test]
fn model_export_matches_fixture() {
    let dir = std::env::temp_dir().join(format!("dgla-model-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("triangle.bix.json");
    let (r, code, _) = run(&[
        "model",
        "simplicial",
        "fixtures/triangle.simp.json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["hypotheses"]["valid_through"], 1);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let fixture: Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("fixtures/triangle.bix.json")).unwrap()).unwrap();
    assert_eq!(written, fixture);
    let (_, code, _) = run(&["bicomplex", "validate", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_format_renders_status_line() {
    let out = Command::new(env!("CARGO_BIN_EXE_dgla"))
        .args(["--format", "text", "tangent", "fixtures/obstructed.dgla.json"])
        .current_dir(root())
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("tangent: ok\n"), "{text}");
    assert!(text.contains("dimension: 1"));
}

#[test]
fn rationals_survive_the_report() {
    let (r, _, _) = run(&[
        "gauge",
        "compose",
        "fixtures/gauge_demo.dgla.json",
        "--gauge",
        "fixtures/gauge_a.elem.json",
        "fixtures/gauge_b.elem.json",
    ]);
    let terms = r["payload"]["result"]["terms"].as_array().unwrap();
    let coeffs: Vec<&str> = terms.iter().map(|t| t[2].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "1/2"]);
}
