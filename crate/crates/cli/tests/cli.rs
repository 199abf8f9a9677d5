//! End-to-end runs of the `specdec` binary: JSON and CSV outputs, exit
//! codes, and byte-for-byte determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn specdec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specdec"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, contents: &str) {
    fs::write(dir.join(name), contents).unwrap();
}

const K2: &str = r#"{"n":2,"edges":[[0,1]],"root":0}"#;
const K3: &str = r#"{"n":3,"edges":[[0,1],[0,2],[1,2]],"root":0}"#;
const C4: &str = r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]]}"#;

#[test]
fn gamma_of_edge_decoration() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k2.json", K2);
    let v = stdout_json(&specdec(dir.path(), &["gamma", "--decoration", "k2.json"]));
    assert!((v["c"].as_f64().unwrap() + 1.0).abs() < 1e-10);
    assert_eq!(v["poles"].as_array().unwrap().len(), 1);
    assert!((v["poles"][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((v["weights"][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(v["remainder"].as_array().unwrap().is_empty());
    assert_eq!(v["cyclic"], Value::Bool(true));
}

#[test]
fn gamma_of_triangle_decoration() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.json", K3);
    let v = stdout_json(&specdec(dir.path(), &["gamma", "--decoration", "k3.json"]));
    assert!((v["c"].as_f64().unwrap() + 2.0).abs() < 1e-10);
    assert!((v["poles"][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((v["weights"][0].as_f64().unwrap() - 2.0).abs() < 1e-10);
    let remainder = v["remainder"].as_array().unwrap();
    assert_eq!(remainder.len(), 1);
    assert!((remainder[0].as_f64().unwrap() - 3.0).abs() < 1e-10);
    assert_eq!(v["cyclic"], Value::Bool(false));
}

#[test]
fn gamma_of_single_vertex_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pt.json", r#"{"n":1,"edges":[],"root":0}"#);
    write(dir.path(), "zero.json", r#"{"dim":1,"entries":[[0.0]]}"#);
    let v = stdout_json(&specdec(
        dir.path(),
        &["gamma", "--decoration", "pt.json", "--input", "zero.json"],
    ));
    assert!(v["c"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["poles"].as_array().unwrap().is_empty());
    assert!(v["weights"].as_array().unwrap().is_empty());
    assert!(v["remainder"].as_array().unwrap().is_empty());
    assert_eq!(v["cyclic"], Value::Bool(true));
}

#[test]
fn gamma_accepts_operator_referencing_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.json", K3);
    write(dir.path(), "op.json", r#"{"laplacian_of":"k3.json"}"#);
    let explicit = specdec(
        dir.path(),
        &["gamma", "--decoration", "k3.json", "--input", "op.json"],
    );
    let implicit = specdec(dir.path(), &["gamma", "--decoration", "k3.json"]);
    assert!(explicit.status.success());
    assert_eq!(explicit.stdout, implicit.stdout);
}

#[test]
fn decorate_emits_product_graph() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c4.json", C4);
    write(dir.path(), "k2.json", K2);
    let v = stdout_json(&specdec(
        dir.path(),
        &["decorate", "--input", "c4.json", "--decoration", "k2.json"],
    ));
    assert_eq!(v["n"], Value::from(8));
    let expected: Value = serde_json::from_str(
        "[[0,1],[0,2],[0,6],[2,3],[2,4],[4,5],[4,6],[6,7]]",
    )
    .unwrap();
    assert_eq!(v["edges"], expected);
    assert!(v.get("root").is_none());
}

#[test]
fn spectrum_preset_band_splits_at_pole() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k2.json", K2);
    let v = stdout_json(&specdec(
        dir.path(),
        &["spectrum", "--preset", "zd:2", "--decoration", "k2.json"],
    ));
    let intervals = v["intervals"].as_array().unwrap();
    assert_eq!(intervals.len(), 2);
    let ends = [
        [0.0, 5.0 - 17f64.sqrt()],
        [2.0, 5.0 + 17f64.sqrt()],
    ];
    for (iv, expect) in intervals.iter().zip(ends) {
        assert!((iv[0].as_f64().unwrap() - expect[0]).abs() < 1e-9);
        assert!((iv[1].as_f64().unwrap() - expect[1]).abs() < 1e-9);
    }
    assert!(v["points"].as_array().unwrap().is_empty());
}

#[test]
fn spectrum_preset_flat_band_is_extensive() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.json", K3);
    let v = stdout_json(&specdec(
        dir.path(),
        &["spectrum", "--preset", "zd:1", "--decoration", "k3.json"],
    ));
    let intervals = v["intervals"].as_array().unwrap();
    assert_eq!(intervals.len(), 2);
    // γ(E) = E − 2 + 2/(1 − E); the outer band edges are the two solutions
    // of γ(E) = 4, and the inner edges sit at γ⁻¹(0) = {0} and the
    // remainder eigenvalue 3.
    let gamma = |e: f64| e - 2.0 + 2.0 / (1.0 - e);
    assert!(intervals[0][0].as_f64().unwrap().abs() < 1e-9);
    assert!((gamma(intervals[0][1].as_f64().unwrap()) - 4.0).abs() < 1e-9);
    assert!((intervals[1][0].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!((gamma(intervals[1][1].as_f64().unwrap()) - 4.0).abs() < 1e-9);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert!((points[0]["value"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(points[0]["multiplicity"], Value::from("extensive"));
}

#[test]
fn spectrum_of_finite_base_lists_points() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c4.json", C4);
    write(dir.path(), "k2.json", K2);
    let v = stdout_json(&specdec(
        dir.path(),
        &["spectrum", "--input", "c4.json", "--decoration", "k2.json"],
    ));
    assert!(v["intervals"].as_array().unwrap().is_empty());
    let points = v["points"].as_array().unwrap();
    let expected = [
        (0.0, 1),
        (2.0 - 2f64.sqrt(), 2),
        (3.0 - 5f64.sqrt(), 1),
        (2.0, 1),
        (2.0 + 2f64.sqrt(), 2),
        (3.0 + 5f64.sqrt(), 1),
    ];
    assert_eq!(points.len(), expected.len());
    for (pt, (value, mult)) in points.iter().zip(expected) {
        assert!(
            (pt["value"].as_f64().unwrap() - value).abs() < 1e-9,
            "point {pt} vs {value}"
        );
        assert_eq!(pt["multiplicity"], Value::from(mult));
    }
}

#[test]
fn sample_identity_map_exact_rows() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "id.json", r#"{"c":0,"poles":[],"weights":[]}"#);
    let out = specdec(
        dir.path(),
        &["sample-gamma", "--input", "id.json", "--range", "0", "1", "--step", "0.5"],
    );
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "E,gamma,dgamma\n0,0,1\n0.5,0.5,1\n1,1,1\n"
    );
}

#[test]
fn sample_known_values_on_shifted_maps() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "edge.json", r#"{"c":-1,"poles":[1],"weights":[1]}"#);
    let out = specdec(
        dir.path(),
        &["sample-gamma", "--input", "edge.json", "--range", "2", "2", "--step", "1"],
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "E,gamma,dgamma\n2,0,2\n");

    write(dir.path(), "tri.json", r#"{"c":-2,"poles":[1],"weights":[2]}"#);
    let out = specdec(
        dir.path(),
        &["sample-gamma", "--input", "tri.json", "--range", "3", "3", "--step", "1"],
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "E,gamma,dgamma\n3,0,1.5\n");
}

#[test]
fn sample_marks_pole_gaps_and_stays_monotone() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.json", K3);
    let gamma = specdec(
        dir.path(),
        &["gamma", "--decoration", "k3.json", "--output", "map.json"],
    );
    assert!(gamma.status.success());
    // Extra "remainder"/"cyclic" fields in the map file must be tolerated.
    let out = specdec(
        dir.path(),
        &["sample-gamma", "--input", "map.json", "--range", "0", "2", "--step", "0.25"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,gamma,dgamma"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[4], ["1", "NaN", "NaN"]);
    for segment in rows.split(|r| r[1] == "NaN") {
        let gammas: Vec<f64> = segment.iter().map(|r| r[1].parse().unwrap()).collect();
        assert!(gammas.windows(2).all(|w| w[0] < w[1]), "rows {segment:?}");
        for row in segment {
            assert!(row[2].parse::<f64>().unwrap() >= 1.0);
        }
    }
}

#[test]
fn sample_rejects_bad_ranges() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "id.json", r#"{"c":0,"poles":[],"weights":[]}"#);
    let out = specdec(
        dir.path(),
        &["sample-gamma", "--input", "id.json", "--range", "2", "1", "--step", "0.5"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty range"));

    let out = specdec(
        dir.path(),
        &["sample-gamma", "--input", "id.json", "--range", "0", "1", "--step", "0"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
}

#[test]
fn verify_report_is_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--seed", "3", "--cases", "2", "--output", "report.json"];
    assert!(specdec(dir.path(), &args).status.success());
    let first = fs::read(dir.path().join("report.json")).unwrap();
    assert!(specdec(dir.path(), &args).status.success());
    let second = fs::read(dir.path().join("report.json")).unwrap();
    assert_eq!(first, second);

    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], Value::from(3));
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    let names: Vec<&str> = cases[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "spectral_map",
            "herglotz_constant",
            "herglotz_weight_sum",
            "herglotz_interlacing",
            "herglotz_resolvent",
            "green_relation",
            "measure_atoms",
            "measure_sum",
            "measure_total",
            "pole_projection",
        ]
    );
    assert_eq!(v["summary"]["passed"], Value::from(2));
    assert_eq!(v["summary"]["failed"], Value::from(0));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = specdec(dir.path(), &["verify", "--cases", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["passed"], Value::from(0));
    assert_eq!(v["summary"]["failed"], Value::from(0));

    let out = specdec(
        dir.path(),
        &["verify", "--seed", "1", "--cases", "2", "--tol-match", "1e-30"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
}

#[test]
fn stdout_outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.json", K3);
    let a = specdec(dir.path(), &["gamma", "--decoration", "k3.json"]);
    let b = specdec(dir.path(), &["gamma", "--decoration", "k3.json"]);
    assert_eq!(a.stdout, b.stdout);

    let a = specdec(
        dir.path(),
        &["spectrum", "--preset", "zd:1", "--decoration", "k3.json"],
    );
    let b = specdec(
        dir.path(),
        &["spectrum", "--preset", "zd:1", "--decoration", "k3.json"],
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k2.json", K2);

    let out = specdec(dir.path(), &["gamma", "--decoration", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));

    write(dir.path(), "broken.json", "{\"n\": 2,");
    let out = specdec(dir.path(), &["gamma", "--decoration", "broken.json"]);
    assert_eq!(out.status.code(), Some(2));

    write(dir.path(), "noroot.json", r#"{"n":2,"edges":[[0,1]]}"#);
    let out = specdec(dir.path(), &["gamma", "--decoration", "noroot.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("root"));

    let out = specdec(
        dir.path(),
        &["spectrum", "--preset", "zd:0", "--decoration", "k2.json"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("preset"));

    write(dir.path(), "loose.json", r#"{"n":2,"edges":[],"root":0}"#);
    write(dir.path(), "coupled.json", r#"{"dim":2,"entries":[[0.0,0.5],[0.5,0.0]]}"#);
    let out = specdec(
        dir.path(),
        &["gamma", "--decoration", "loose.json", "--input", "coupled.json"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0,1)"));
}
