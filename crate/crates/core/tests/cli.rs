use std::path::PathBuf;

use logbott::cli::run;
use serde_json::Value;

fn data(rel: &str) -> String {
    format!("{}/examples/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logbott-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("logbott").chain(args.iter().copied());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn verify_all_prints_one_row_per_example() {
    let (code, out) = call(&["verify", "--all"]);
    assert_eq!(code, 0, "{out}");
    for (id, total) in [
        ("weighted-resolution", "3=3"),
        ("p1-p1-pm", "4=4"),
        ("fm-p2-two-points", "6=6"),
    ] {
        let row = out
            .lines()
            .find(|l| l.starts_with(id))
            .unwrap_or_else(|| panic!("no row for {id}:\n{out}"));
        assert!(row.contains(total) && row.ends_with('✓'), "{row}");
    }
}

#[test]
fn verify_json_report_has_schema_and_exact_values() {
    let (code, out) = call(&[
        "--json",
        "verify",
        "weighted-resolution",
        "--param",
        "k=3",
        "--param",
        "c=9/2",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    let r = &v["reports"][0];
    assert_eq!(r["schema"], 1);
    assert_eq!(r["example"], "weighted-resolution");
    assert_eq!(r["phi"], "top_chern");
    assert_eq!(r["global"], "3");
    assert_eq!(r["sum"], "3");
    assert_eq!(r["matched"], true);
    let values: Vec<&str> = r["contributions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["2", "1"]);
}

#[test]
fn output_is_deterministic() {
    let first = call(&["--json", "verify", "--all"]);
    let second = call(&["--json", "verify", "--all"]);
    assert_eq!(first, second);
    let a = call(&[
        "--seed",
        "7",
        "analyze-field",
        &data("charts/symbolic_eigenvalue.json"),
    ]);
    let b = call(&[
        "--seed",
        "7",
        "analyze-field",
        &data("charts/symbolic_eigenvalue.json"),
    ]);
    assert_eq!(a, b);
}

#[test]
fn analyze_field_reports_the_curve_chart() {
    let (code, out) = call(&["analyze-field", &data("charts/weighted_chart_u.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("[[1, 0], [0, 5]]"), "{out}");
    assert!(out.contains("Nondegenerate"), "{out}");

    let (code, out) = call(&[
        "--json",
        "analyze-field",
        &data("charts/weighted_chart_sigma.json"),
    ]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["bott_matrix"],
        serde_json::json!([["1", "0"], ["0", "-5"]])
    );
    assert_eq!(v["log_eigenvalues"][0]["value"], "-5");
    assert_eq!(v["verdict"]["verdict"], "nondegenerate");
}

#[test]
fn unexpected_verdict_exits_one() {
    let text = std::fs::read_to_string(data("charts/weighted_chart_u_degenerate.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc.as_object_mut().unwrap().remove("expect");
    let path = scratch("degenerate.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, out) = call(&["analyze-field", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("Degenerate"), "{out}");
}

#[test]
fn ch_residue_of_the_linear_map_is_one() {
    let (code, out) = call(&[
        "--json",
        "ch-residue",
        "--eps",
        "0.1",
        "--points",
        "64",
        &data("maps/linear.json"),
    ]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - 1.0).abs() < 1e-8, "{re}");
    assert_eq!(v["expected"], "1");

    let (code, out) = call(&[
        "ch-residue",
        "--richardson",
        "0.1,0.05",
        &data("maps/scaled_dy.json"),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("expected 1/6"), "{out}");
}

#[test]
fn usage_and_input_errors_exit_two() {
    for args in [
        vec![],
        vec!["verify"],
        vec!["verify", "--all", "weighted-resolution"],
        vec!["frobnicate"],
        vec!["verify", "--all", "--param", "q=1"],
        vec!["verify", "--all", "--param", "k"],
        vec!["verify", "nope"],
        vec!["analyze-field", "/nonexistent/chart.json"],
        vec!["ch-residue", "--points", "48", "/nonexistent/map.json"],
    ] {
        let (code, out) = call(&args);
        assert_eq!(code, 2, "{args:?}: {out}");
    }
    let (code, _) = call(&["ch-residue", "--points", "48", &data("maps/linear.json")]);
    assert_eq!(code, 2);
}

#[test]
fn constraint_violation_names_the_inequality() {
    let (code, out) = call(&["--json", "verify", "weighted-resolution", "--param", "c=2"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "constraint");
    assert!(v["error"]["message"].as_str().unwrap().contains("c ≠ ka"));
}

#[test]
fn exported_catalog_round_trips_through_verify() {
    for name in ["catalog.json", "catalog.toml"] {
        let path = scratch(name);
        let (code, out) = call(&["export-catalog", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        let (code, out) = call(&["verify", "--file", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().count(), 4, "{out}");
    }
}

#[test]
fn wrong_expectation_in_a_catalog_file_exits_one() {
    let path = scratch("wrong.json");
    assert_eq!(call(&["export-catalog", path.to_str().unwrap()]).0, 0);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["entries"][0]["expected_contributions"] = serde_json::json!(["1", "2"]);
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, out) = call(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains('✗'), "{out}");
}
