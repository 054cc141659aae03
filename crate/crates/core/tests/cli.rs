//! End-to-end runs of the command-line entry point.

use std::path::{Path, PathBuf};

use metric_lie::cli::run;
use serde_json::Value;
use tempfile::TempDir;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("metric-lie").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = invoke(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad json ({e}): {out}\nstderr: {err}"));
    (code, v)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Runs `catalog NAME params --out DIR/NAME.json` and returns the file path.
fn catalog_file(dir: &Path, name: &str, params: &[&str]) -> PathBuf {
    let out = dir.join(format!("{name}.json"));
    let mut args = vec!["--out", out.to_str().unwrap(), "catalog", name];
    args.extend_from_slice(params);
    let (code, _, err) = invoke(&args);
    assert_eq!(code, 0, "{err}");
    out
}

const PLANE: &str = r#"{"dim": 2, "brackets": [], "metric": [[1, 0], [0, 1]]}"#;

#[test]
fn catalog_lists_every_entry() {
    let (code, v) = json_of(&["catalog"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["heisenberg", "einstein_solvable", "sl_killing", "sl_complex_typeI", "affine_plane", "abelian", "double_ext_demo"] {
        assert!(names.contains(&n), "missing {n}");
    }
}

#[test]
fn catalog_output_feeds_report() {
    let dir = TempDir::new().unwrap();
    let h = catalog_file(dir.path(), "heisenberg", &["n=1"]);
    assert!(dir.path().join("heisenberg.json.sidecar.json").exists());
    let (code, v) = json_of(&["report", h.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["structure"]["is_nilpotent"], true);
    let ev: Vec<f64> = v["ricci_eigenvalues"].as_array().unwrap().iter().map(|e| e["re"].as_f64().unwrap()).collect();
    let expected = [-1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0];
    for (a, b) in ev.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }

    let e = catalog_file(dir.path(), "einstein_solvable", &["n=2"]);
    let (_, v) = json_of(&["report", e.to_str().unwrap()]);
    assert_eq!(v["classification"]["tag"]["kind"], "Einstein");
    assert!((v["einstein"]["constant"].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn report_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = catalog_file(dir.path(), "sl_complex_typeI", &["n=2", "lambda=1", "mu=2"]);
    let a = invoke(&["--json", "report", p.to_str().unwrap()]);
    let b = invoke(&["--json", "report", p.to_str().unwrap()]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["classification"]["tag"]["kind"], "TypeI");
    assert!(v["type_i"]["residuals"]["reconstruction"].as_f64().unwrap() < 1e-8);
}

#[test]
fn report_walks_directories_in_order() {
    let dir = TempDir::new().unwrap();
    catalog_file(dir.path(), "affine_plane", &[]);
    catalog_file(dir.path(), "abelian", &["p=1", "q=1"]);
    write(dir.path(), "zz_broken.json", "{ not json");
    let (code, v) = json_of(&["report", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    let entries = v.as_array().unwrap();
    // sidecars are skipped
    assert_eq!(entries.len(), 3);
    assert!(entries[0]["path"].as_str().unwrap().ends_with("abelian.json"));
    assert!(entries[1]["path"].as_str().unwrap().ends_with("affine_plane.json"));
    assert_eq!(entries[2]["exit_code"], 2);
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "good.json", PLANE);
    assert_eq!(invoke(&["validate", good.to_str().unwrap()]).0, 0);

    let degenerate = write(dir.path(), "degenerate.json", r#"{"dim": 2, "brackets": [], "metric": [[1, 0], [0, 0]]}"#);
    let (code, v) = json_of(&["validate", degenerate.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["nondegeneracy"]["passed"], false);

    // [e0,e1] = e2, [e1,e2] = e0, [e0,e2] = e0 violates Jacobi
    let jacobi = write(
        dir.path(),
        "jacobi.json",
        r#"{"dim": 3, "brackets": [
            {"i": 0, "j": 1, "coeffs": {"2": 1}},
            {"i": 0, "j": 2, "coeffs": {"0": 1}},
            {"i": 1, "j": 2, "coeffs": {"0": 1}}],
          "metric": [[1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let (code, v) = json_of(&["validate", jacobi.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["jacobi"]["passed"], false);

    let malformed = write(dir.path(), "malformed.json", r#"{"dim": 2, "brackets": [], "metric": [[1, 0]]}"#);
    assert_eq!(invoke(&["validate", malformed.to_str().unwrap()]).0, 2);
    assert_eq!(invoke(&["validate", dir.path().join("missing.json").to_str().unwrap()]).0, 2);
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["catalog", "no_such_algebra"]).0, 2);
    assert_eq!(invoke(&["catalog", "heisenberg"]).0, 2);
    assert_eq!(invoke(&["catalog", "heisenberg", "n=1.5"]).0, 2);
    assert_eq!(invoke(&["--tol-abs", "-1", "catalog"]).0, 2);
}

#[test]
fn double_extend_then_decompose() {
    let dir = TempDir::new().unwrap();
    let base = write(dir.path(), "plane.json", PLANE);
    let ext = write(dir.path(), "ext.json", r#"{"D": [[1, 0], [0, 1]], "K": [[0, 0], [0, 0]], "L": [0, 0]}"#);
    let out = dir.path().join("extended.json");
    let (code, _, err) = invoke(&["--out", out.to_str().unwrap(), "double-extend", base.to_str().unwrap(), ext.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("extended.json.sidecar.json")).unwrap()).unwrap();
    assert!((side["gamma"].as_f64().unwrap() + 2.0).abs() < 1e-12);
    assert_eq!(side["conditions"]["passed"], true);

    let (code, v) = json_of(&["report", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["classification"]["tag"]["kind"], "TypeII");
    assert_eq!(v["signature"]["p"], 1);
    assert_eq!(v["signature"]["q"], 3);

    let (code, v) = json_of(&["decompose", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra"]["dim"], 2);
    assert!(v["sidecar"]["rebuild_residual"].as_f64().unwrap() < 1e-8);
    // the canonical basis rescales Γ to its sign
    assert_eq!(v["sidecar"]["sign"], -1.0);
    assert!((v["sidecar"]["gamma"].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn invalid_extension_data_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let base = write(dir.path(), "plane.json", PLANE);
    let ext = write(dir.path(), "ext.json", r#"{"D": [[0, 0], [0, 0]], "K": [[1, 0], [0, 0]], "L": [0, 0]}"#);
    let (code, _, err) = invoke(&["double-extend", base.to_str().unwrap(), ext.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("skewness"), "{err}");
}

#[test]
fn complexify_type_one() {
    let dir = TempDir::new().unwrap();
    let aff = catalog_file(dir.path(), "affine_plane", &[]);
    let (code, v) = json_of(&["complexify", aff.to_str().unwrap(), "--type1", "-3", "5"]);
    assert_eq!(code, 0);
    assert!((v["sidecar"]["lambda"].as_f64().unwrap() + 3.0).abs() < 1e-9);
    assert!((v["sidecar"]["mu"].as_f64().unwrap() - 5.0).abs() < 1e-9);

    let (code, v) = json_of(&["complexify", aff.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra"]["dim"], 4);

    // a non-Einstein base cannot carry the type I metric
    let h = catalog_file(dir.path(), "heisenberg", &["n=1"]);
    assert_eq!(invoke(&["complexify", h.to_str().unwrap(), "--type1", "0", "1"]).0, 3);
}

#[test]
fn decompose_rejects_non_lorentz_input() {
    let dir = TempDir::new().unwrap();
    let h = catalog_file(dir.path(), "heisenberg", &["n=1"]);
    assert_eq!(invoke(&["decompose", h.to_str().unwrap()]).0, 3);
}
