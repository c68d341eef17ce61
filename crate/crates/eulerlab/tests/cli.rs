use std::path::PathBuf;
use std::process::{Command, Output};

use eulerlab::{parse_rep, CliError};
use eulerlab_core::surfacereps::RepError;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn eulerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerlab"))
        .args(args)
        .env_remove("EULERLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn rot_of_rotation() {
    let out = eulerlab(&["rot", "--lift", "rotation:0.3", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(lo <= 0.3 && 0.3 <= hi && hi - lo <= 1e-9);
}

#[test]
fn mw_on_punctured_tori() {
    let out = eulerlab(&["mw", "--rep", &path("sanov.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["chi"], -1);
    assert_eq!(v["ok"], true);
    // tr [a, b] = 18: the boundary lift has a fixed point
    assert_eq!(v["e"].as_f64(), Some(0.0));

    let v = json(&eulerlab(&["mw", "--rep", &path("maximal_torus.json")]));
    assert_eq!(v["e"].as_f64().map(f64::abs), Some(1.0));
    assert_eq!(v["equality"], true);
}

#[test]
fn closed_surfaces() {
    let v = json(&eulerlab(&["euler", "--rep", &path("octagon_genus2.json")]));
    assert_eq!(v["e"].as_f64(), Some(-2.0));
    assert!(v["relator_residual"].as_f64().unwrap() < 1e-6);
    let v = json(&eulerlab(&["survey", "--rep", &path("octagon_genus2.json"), "--ball", "2"]));
    assert_eq!(v["verdict"], "consistent");
    let v = json(&eulerlab(&["euler", "--rep", &path("trivial_genus2.json")]));
    assert_eq!(v["e"].as_f64(), Some(0.0));
}

#[test]
fn simpvol_report() {
    let out = eulerlab(&["simpvol", "--genus", "2", "--cover", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exact"].as_f64(), Some(4.0));
    assert_eq!(v["lower"].as_f64(), Some(4.0));
    assert!((v["upper"].as_f64().unwrap() - 4.2).abs() < 1e-12);
    assert_eq!(v["triangulation"]["triangles"], 6);
    assert_eq!(v["triangulation"]["boundary_residual"].as_f64(), Some(0.0));
    let v = json(&eulerlab(&["simpvol", "--genus", "0", "--punctures", "3"]));
    assert_eq!(v["exact"].as_f64(), Some(2.0));
    assert!(v["upper"].is_null());
}

#[test]
fn rep_files() {
    let r = parse_rep(&fixture("trivial_genus2.json")).unwrap();
    for l in r.lifts() {
        for x in [0.0, 0.3, 0.9] {
            assert_eq!(l.eval(x), x);
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    std::fs::write(
        &missing,
        r#"{"genus": 1, "punctures": 1, "generators": {"a1": {"kind": "rotation", "alpha": 0.1}}}"#,
    )
    .unwrap();
    match parse_rep(&missing) {
        Err(CliError::Schema { location, .. }) => assert_eq!(location, "generators.b1"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_rep(&fixture("not_a_rep_genus2.json")),
        Err(CliError::Rep(RepError::NotARepresentation { .. }))
    ));
    let out = eulerlab(&["euler", "--rep", &path("not_a_rep_genus2.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "not_a_representation");
    let out = eulerlab(&["euler", "--rep", &missing.display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "schema");
}

#[test]
fn sampling_is_reproducible() {
    let args = [
        "it", "eul", "--matrices", &path("eul_n2.json"), "--samples", "20000", "--seed", "42",
    ];
    let a = eulerlab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_eulerlab"))
        .args(args)
        .env("EULERLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["samples"], 20000);
    let (mean, hw) = (v["mean"].as_f64().unwrap(), v["half_width"].as_f64().unwrap());
    assert!(mean.abs() <= hw);

    let unseeded = eulerlab(&["it", "eul", "--matrices", &path("eul_n1.json")]);
    assert_eq!(unseeded.status.code(), Some(1));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_eulerlab"))
        .args(["simpvol", "--genus", "1"])
        .env("EULERLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(1));
}

#[test]
fn quasimorphism_commands() {
    let v = json(&eulerlab(&["qm", "eval", "--alpha", "sign", "--word", "1,2"]));
    assert_eq!(v["value"].as_f64(), Some(2.0));
    let v = json(&eulerlab(&["qm", "defect", "--alpha", "sign", "--ball", "2"]));
    assert!(v["lower_bound"].as_f64().unwrap() >= 2.0);
    let v = json(&eulerlab(&[
        "qm", "homogenize", "--alpha", "sign", "--word", "1,2", "--defect", "2", "--tol", "1e-3",
    ]));
    assert_eq!(v["value"].as_f64(), Some(2.0));
}

#[test]
fn extension_commands() {
    let v = json(&eulerlab(&["ext", "build", "--input", &path("ext_z4_carry.json")]));
    assert_eq!(v["associative"], true);
    assert_eq!(v["section_roundtrip"], true);
    let out = eulerlab(&["ext", "build", "--input", &path("ext_not_cocycle.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&eulerlab(&["ext", "check", "--input", &path("ext_not_cocycle.json")]));
    assert_eq!(v["is_cocycle"], false);
}

#[test]
fn tau_and_tvalue() {
    let v = json(&eulerlab(&[
        "tau", "--rep", &path("maximal_torus.json"), "--pairs", &path("pairs.json"),
    ]));
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    let v = json(&eulerlab(&["tau", "--f", "rotation:0.3", "--g", "rotation:0.45"]));
    assert!(v["records"][0]["value"].as_f64().unwrap().abs() <= 1e-12);
    let v = json(&eulerlab(&["it", "tvalue", "--vectors", &path("vectors_n1.json")]));
    assert_eq!(v["t"], 1);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = eulerlab(&["simpvol", "--genus", "3", "--output", &target.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["exact"].as_f64(), Some(8.0));
}
