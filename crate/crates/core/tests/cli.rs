use std::path::PathBuf;
use std::process::Command;

use maghom::cli::run_captured;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maghom"))
}

#[test]
fn k2_mh_table_is_the_ladder() {
    let (code, out, err) = run_captured(&["mh", &data("k2.json"), "--nmax", "3", "--lmax", "3", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for r in rows {
        let n = r["n"].as_u64().unwrap();
        let l: u64 = r["l"].as_str().unwrap().parse().unwrap();
        assert_eq!(r["betti"].as_u64().unwrap(), if n == l { 2 } else { 0 });
        assert!(r["torsion"].as_array().unwrap().is_empty());
    }
}

#[test]
fn c3_crosscheck_agrees() {
    let out = bin().args(["crosscheck", &data("c3.json"), "--nmax", "2", "--lmax", "3"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("all bidegrees agree"));
}

#[test]
fn crosscheck_with_coefficients_agrees() {
    let (code, out, _) =
        run_captured(&["crosscheck", &data("c3.json"), "--coefficients", &data("c3_representable.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agree"], Value::Bool(true));
}

#[test]
fn triangle_violation_is_reported_with_witness() {
    let out = bin().args(["validate", &data("bad_triangle.json")]).output().unwrap();
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "TriangleViolation");
    assert_eq!(v["witness"], serde_json::json!(["a", "b", "c"]));
}

#[test]
fn invalid_module_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doubled.json");
    let text = std::fs::read_to_string(data("c3_representable.json")).unwrap().replace("\"a->c\": {\"0\": [[1]]}", "\"a->c\": {\"0\": [[2]]}");
    std::fs::write(&path, text.replace("c3.json", &data("c3.json"))).unwrap();
    let (code, _, err) = run_captured(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"], "InvalidModule");
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "csv", "table"] {
        let args = ["ring", &data("c3.json"), "--nmax", "2", "--lmax", "4", "--format", format];
        let a = bin().args(args).output().unwrap();
        let b = bin().args(args).output().unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn csv_columns() {
    let (code, out, _) = run_captured(&["tor", &data("half_line.json"), "--lmax", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,l,betti,torsion\n"));
    assert!(out.contains("\n1,1/2,2,\n"));
}

#[test]
fn ext_needs_a_field() {
    let (code, _, err) = run_captured(&["ext", &data("k2.json"), "--field", "Z"]);
    assert_eq!(code, 2);
    assert!(err.contains("InvalidField"));
    let (code, out, _) = run_captured(&["ext", &data("k2.json"), "--field", "Fp:2", "--format", "csv", "--nmax", "2", "--lmax", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\n2,2,2,\n"));
}

#[test]
fn unsupported_format_and_field() {
    let (code, _, err) = run_captured(&["mh", &data("k2.json"), "--format", "xml"]);
    assert_eq!(code, 2);
    assert!(err.contains("UnsupportedFormat"));
    let (code, _, err) = run_captured(&["mh", &data("k2.json"), "--field", "Fp:6"]);
    assert_eq!(code, 2);
    assert!(err.contains("InvalidField"));
}

#[test]
fn relations_report() {
    let (code, out, _) = run_captured(&["relations", &data("diamond.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["R1"], serde_json::json!([[["a", "b", "d"], ["a", "c", "d"]]]));
    assert_eq!(v["R2"], serde_json::json!([]));
    assert_eq!(v["presentation"]["JN_in_relations"], Value::Bool(true));
    let (code, _, _) = run_captured(&["relations", &data("half_line.json")]);
    assert_eq!(code, 2);
}

#[test]
fn inv_and_coinv_of_a_representable() {
    let (code, out, _) = run_captured(&["inv", &data("c3_representable.json"), "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "l,rank\n0,0\n1,0\n2,2\n");
    let (code, out, _) = run_captured(&["coinv", &data("c3_representable.json"), "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "l,betti,torsion\n0,1,\n1,0,\n2,1,\n");
}

#[test]
fn generated_instances_load_back() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["space", "module"] {
        let (code, out, err) = run_captured(&["gen", "--seed", "11", "--points", "3", "--kind", kind]);
        assert_eq!(code, 0, "{err}");
        let (_, again, _) = run_captured(&["gen", "--seed", "11", "--points", "3", "--kind", kind]);
        assert_eq!(out, again);
        let path = dir.path().join(format!("{kind}.json"));
        std::fs::write(&path, out).unwrap();
        let (code, _, err) = run_captured(&["validate", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
    }
}
