//! Golden runs against the built binary: exit-code contract, determinism,
//! and the transform round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclobh"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn ps(p: &PathBuf) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn transform_round_trip_within_tolerance() {
    let dir = TempDir::new().unwrap();
    let poly = path(&dir, "poly.json");
    std::fs::write(
        &poly,
        r#"{"N":3,"n":2,"terms":[
            {"alpha":[0,1],"re":1.0,"im":0.5},
            {"alpha":[2,1],"re":-0.25,"im":0.125},
            {"alpha":[1,0],"re":0.0,"im":-2.0}]}"#,
    )
    .unwrap();
    let table = path(&dir, "table.json");
    let back = path(&dir, "back.json");
    let out = run(&[
        "transform",
        "--direction",
        "synthesize",
        "--in",
        &ps(&poly),
        "--out",
        &ps(&table),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[
        "transform",
        "--direction",
        "analyze",
        "--in",
        &ps(&table),
        "--out",
        &ps(&back),
    ]);
    assert!(out.status.success());

    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&poly).unwrap()).unwrap();
    let recovered: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    // Header first, then the polynomial fields.
    let text = std::fs::read_to_string(&back).unwrap();
    assert!(text.trim_start().starts_with("{\n  \"header\""));
    let mut originals: Vec<(Vec<u8>, f64, f64)> = original["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["alpha"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap() as u8)
                    .collect(),
                t["re"].as_f64().unwrap(),
                t["im"].as_f64().unwrap(),
            )
        })
        .collect();
    originals.sort_by(|a, b| a.0.cmp(&b.0));
    let mut recovereds: Vec<(Vec<u8>, f64, f64)> = recovered["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["alpha"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap() as u8)
                    .collect(),
                t["re"].as_f64().unwrap(),
                t["im"].as_f64().unwrap(),
            )
        })
        .collect();
    recovereds.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(originals.len(), recovereds.len());
    for (a, b) in originals.iter().zip(recovereds.iter()) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() < 1e-10 && (a.2 - b.2).abs() < 1e-10);
    }
}

#[test]
fn empty_polynomial_synthesizes_to_zeros() {
    let dir = TempDir::new().unwrap();
    let poly = path(&dir, "zero.json");
    std::fs::write(&poly, r#"{"N":3,"n":2,"terms":[]}"#).unwrap();
    let table = path(&dir, "table.json");
    let out = run(&[
        "transform",
        "--direction",
        "synthesize",
        "--in",
        &ps(&poly),
        "--out",
        &ps(&table),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 9);
    for s in samples {
        assert_eq!(s["re"].as_f64().unwrap(), 0.0);
        assert_eq!(s["im"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn mismatched_order_flag_fails() {
    let dir = TempDir::new().unwrap();
    let poly = path(&dir, "poly.json");
    std::fs::write(&poly, r#"{"N":3,"n":1,"terms":[{"alpha":[1],"re":1.0,"im":0.0}]}"#).unwrap();
    let out = run(&[
        "transform",
        "--direction",
        "synthesize",
        "--in",
        &ps(&poly),
        "--N",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn prime_splitter_rejects_composite_order() {
    let out = run(&["split", "--method", "prime", "--N", "4", "--n", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
}

#[test]
fn search_with_fixed_seed_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.csv");
    let b = path(&dir, "b.csv");
    for target in [&a, &b] {
        let out = run(&[
            "bh-search",
            "--N",
            "3",
            "--n",
            "2",
            "--d",
            "2",
            "--iterations",
            "200",
            "--seed",
            "11",
            "--format",
            "csv",
            "--out",
            &ps(target),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("# {\"tool\":\"cyclobh\""));
    assert!(text.contains("\"master_seed\":11"));
}

#[test]
fn witness_ratio_reported() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "witness.csv");
    let out = run(&["maxmod", "--n3-counterexample", "--out", &ps(&csv)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let data_row = text.lines().nth(2).unwrap();
    let ratio: f64 = data_row.split(',').last().unwrap().parse().unwrap();
    assert!(ratio >= 1.116025, "ratio {ratio}");
}

#[test]
fn falsified_user_constant_exits_two() {
    // A user-supplied quotient constant far below any admissible value
    // inflates the claimed Bohr radius; the certificate detects the broken
    // claim and the run exits with the violation code.
    let dir = TempDir::new().unwrap();
    let poly = path(&dir, "mono.json");
    std::fs::write(
        &poly,
        r#"{"N":3,"n":2,"terms":[{"alpha":[1,1],"re":1.0,"im":0.0}]}"#,
    )
    .unwrap();
    let out = run(&[
        "bohr",
        "--N",
        "3",
        "--n",
        "2",
        "--d",
        "2",
        "--bh-constant",
        "0.0001",
        "--check",
        &ps(&poly),
        "--rho",
        "2.0",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound violation"));
}

#[test]
fn learn_emits_config_echo_and_rows() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "learn.csv");
    let out = run(&[
        "learn", "--N", "3", "--n", "3", "--d", "1", "--M", "400", "--trials", "2", "--seed",
        "5", "--out", &ps(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# {") && header.contains("\"command\":\"learn\""));
    assert_eq!(lines.next().unwrap(), "trial,M,b,a,surviving,error_sq");
    assert_eq!(lines.count(), 2);
}
