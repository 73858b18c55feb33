//! End-to-end checks of the `theta` binary: exit codes, report schema,
//! determinism, and input validation.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_theta"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("theta-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn cohomology_passes_and_reports_m2() {
    let out = bin().arg("cohomology").output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["pass"], true);
    // m(2) = 3 appears in the report
    let m: Vec<(u64, String)> =
        serde_json::from_value(v["chord_tangent_m"].clone()).unwrap();
    assert!(m.iter().any(|(g, s)| *g == 2 && s == "3"));
    assert_eq!(v["embedding"]["ambient_dim"], 125);
    assert_eq!(v["embedding"]["hyperplanes"], 90);
    assert_eq!(v["embedding"]["quadrics"], 522);
}

#[test]
fn torus_moduli_n2_diag() {
    let tau = write_temp("tau_diag.json", "[[[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 2.0]]]");
    let out = bin()
        .args(["torus-moduli", "--tau"])
        .arg(&tau)
        .args(["--N", "2", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let moduli = v["moduli"].as_array().unwrap();
    assert_eq!(moduli.len(), 16);
    // the identity entry is exactly 1
    assert!((moduli[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["pairing_full_rank"], true);
    // N = 2: all nonzero entries ambiguous
    let amb = v["ambiguous"].as_array().unwrap();
    assert_eq!(amb[0], false);
    assert!(amb[1..].iter().all(|b| b == true));
}

#[test]
fn curve_thomae_is_deterministic_and_passes() {
    let curve = write_temp(
        "curve_x6.json",
        r#"{"coefficients": [[-1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}"#,
    );
    let run = || {
        bin()
            .args(["curve-thomae", "--curve"])
            .arg(&curve)
            .args(["--seed", "11", "--samples", "12"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give byte-identical reports");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["max_cv"].as_f64().unwrap() < 1e-4);
    assert!(v["matched_delta_label"].as_str().unwrap().starts_with('W'));
}

#[test]
fn degenerate_curve_rejected_at_parse() {
    let curve = write_temp(
        "curve_degenerate.json",
        r#"{"branch_points": [[1,0],[1,0],[2,0],[3,0],[4,0],[5,0]]}"#,
    );
    let out = bin()
        .args(["curve-thomae", "--curve"])
        .arg(&curve)
        .args(["--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("discriminant"), "stderr: {err}");
}

#[test]
fn spinor_suite_passes() {
    let out = bin().args(["spinor-suite", "--seed", "3"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["corank_ones"], 6);
    assert_eq!(v["corank_zeros"], 10);
    assert_eq!(v["pfaffian_instances"], 100);
    assert_eq!(v["spinor_square_instances"], 100);
}
