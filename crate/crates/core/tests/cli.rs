mod common;

use std::path::Path;
use std::process::Command;

use clap::Parser;
use common::config_path;
use fssqm::cli::{main_with_args, run, Cli, EXIT_FAILED, EXIT_INPUT, EXIT_OK};

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("fssqm").chain(args.iter().copied()))
        .expect("arguments parse");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&cli, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn cfg(name: &str) -> String {
    config_path(name).display().to_string()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const ONE: &str = r#"{"kind": "poly", "coeffs": [[1.0, 0.0]]}"#;

fn config_json(lambda: usize, dim: usize, structure: &str) -> String {
    let f = vec![ONE; lambda].join(", ");
    format!(
        r#"{{"lambda": {lambda}, "fock_dimension": {dim}, "structure_function": {structure}, "f": [{f}]}}"#
    )
}

#[test]
fn verify_reference_passes() {
    let (code, out, _) = run_cli(&["verify", "--config", &cfg("lambda3_reference.json")]);
    assert_eq!(code, EXIT_OK);
    let rows = out.lines().filter(|l| l.contains(" ok ")).count();
    assert!(rows >= 20, "{out}");
    assert!(out.contains("Q^λ = H"));
}

#[test]
fn verify_reports_failures_with_exit_2() {
    let (code, out, _) = run_cli(&[
        "verify",
        "--config",
        &cfg("lambda3_reference.json"),
        "--tol",
        "1e-300",
    ]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("FAIL"));
}

#[test]
fn verify_json_is_deterministic() {
    let args = [
        "verify",
        "--config",
        &cfg("lambda4_extended.json"),
        "--format",
        "json",
    ];
    let (code, a, _) = run_cli(&args);
    let (_, b, _) = run_cli(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["lambda"], 4);
    assert_eq!(v["sectors"].as_array().unwrap().len(), 4);
    assert!(v.get("timings").is_none());
    assert_eq!(
        v["spectrum"]["levels"][0]["members"][0]["grade"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn verify_timings_are_opt_in() {
    let (_, out, _) = run_cli(&[
        "verify",
        "--config",
        &cfg("lambda2_reference.json"),
        "--format",
        "json",
        "--timings",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["timings"]["audit_ms"].is_number());
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "bad.json",
        "{\n  \"lambda\": 3,\n  \"fock_dimension\": ]\n}",
    );
    let (code, _, err) = run_cli(&["verify", "--config", &p]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 3, column 21"), "{err}");
}

#[test]
fn missing_config_file() {
    let (code, _, err) = run_cli(&["verify", "--config", "/nonexistent/model.json"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cannot read"));
}

#[test]
fn alpha_sum_violation() {
    let dir = tempfile::tempdir().unwrap();
    let body = config_json(
        2,
        16,
        r#"{"kind": "c_lambda_extended", "alpha": [0.5, 0.1]}"#,
    );
    let p = write_config(dir.path(), "alpha.json", &body);
    let (code, _, err) = run_cli(&["verify", "--config", &p]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("sum(alpha) = 0"), "{err}");
}

#[test]
fn lambda_one_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "l1.json",
        &config_json(1, 16, r#"{"kind": "oscillator"}"#),
    );
    let (code, _, err) = run_cli(&["verify", "--config", &p]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("lambda >= 2"), "{err}");
}

#[test]
fn positivity_violation_names_n() {
    let dir = tempfile::tempdir().unwrap();
    let body = config_json(
        2,
        16,
        r#"{"kind": "c_lambda_extended", "alpha": [-2.0, 2.0]}"#,
    );
    let p = write_config(dir.path(), "pos.json", &body);
    let (code, _, err) = run_cli(&["verify", "--config", &p]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("n = 1"), "{err}");
}

#[test]
fn phi_violation_names_n() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"lambda": 2, "fock_dimension": 16, "structure_function": {"kind": "oscillator"},
        "f": [{"kind": "poly", "coeffs": [[-3.0, 0.0], [1.0, 0.0]]}, {"kind": "poly", "coeffs": [[1.0, 0.0]]}]}"#;
    let p = write_config(dir.path(), "phi.json", body);
    let (code, _, err) = run_cli(&["verify", "--config", &p]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("n = 1"), "{err}");
}

#[test]
fn spectrum_csv_rows() {
    let (code, out, _) = run_cli(&[
        "spectrum",
        "--config",
        &cfg("lambda3_reference.json"),
        "--levels",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<(String, String)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[1].to_string(), c[2].to_string())
        })
        .collect();
    let expected: Vec<(String, String)> = [("0", "3"), ("2", "3"), ("6", "3"), ("12", "3")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(rows, expected);
    assert!(out.starts_with("level,energy,multiplicity"));
    assert!(!out.contains('\r'));
}

#[test]
fn spectrum_lambda2_ground_is_single() {
    let (code, out, _) = run_cli(&[
        "spectrum",
        "--config",
        &cfg("lambda2_reference.json"),
        "--levels",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["consistent"], true);
    assert_eq!(v["analytic"]["levels"][0]["multiplicity"], 1);
    assert_eq!(v["numeric"]["levels"][1]["multiplicity"], 2);
}

#[test]
fn spectrum_too_many_levels() {
    let (code, _, err) = run_cli(&[
        "spectrum",
        "--config",
        &cfg("lambda3_reference.json"),
        "--levels",
        "50",
    ]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("need at least 156"), "{err}");
}

#[test]
fn sectors_lambda3() {
    let (code, out, _) = run_cli(&["sectors", "--config", &cfg("lambda3_reference.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("mu = 0: unbroken-nondegenerate"));
    assert!(out.contains("mu = 1: broken-zero-energy"));
    assert!(out.contains("mu = 2: broken-positive-energy"));
    assert_eq!(out.lines().filter(|l| l.starts_with("mu = ")).count(), 3);
}

#[test]
fn sectors_engineered_zero() {
    let (code, out, _) = run_cli(&[
        "sectors",
        "--config",
        &cfg("lambda3_engineered_zero.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[1]["classification"], "unbroken-degenerate");
}

#[test]
fn scan_lambda2() {
    let (code, out, _) = run_cli(&[
        "scan",
        "--config",
        &cfg("calogero_vasiliev.json"),
        "--alpha-index",
        "0",
        "--compensate",
        "1",
        "--from",
        "-0.5",
        "--to",
        "3",
        "--steps",
        "8",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.contains(",true,true,")));
}

#[test]
fn scan_marks_invalid_rows_and_continues() {
    let (code, out, _) = run_cli(&[
        "scan",
        "--config",
        &cfg("calogero_vasiliev.json"),
        "--alpha-index",
        "0",
        "--compensate",
        "1",
        "--from",
        "-2",
        "--to",
        "0",
        "--steps",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("0,-2,2,false,"));
    assert!(rows[0].contains("n = 1"));
    assert!(rows[1].contains("(F = 0)"));
    assert!(rows[2].contains(",true,true,"));
}

#[test]
fn scan_zero_width() {
    let (code, out, _) = run_cli(&[
        "scan",
        "--config",
        &cfg("calogero_vasiliev.json"),
        "--alpha-index",
        "0",
        "--compensate",
        "1",
        "--from",
        "0.25",
        "--to",
        "0.25",
        "--steps",
        "5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn scan_rejects_bad_indices() {
    let (code, _, err) = run_cli(&[
        "scan",
        "--config",
        &cfg("calogero_vasiliev.json"),
        "--alpha-index",
        "0",
        "--compensate",
        "0",
        "--from",
        "0",
        "--to",
        "1",
    ]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("distinct"));
}

#[test]
fn unknown_flag_is_an_input_error() {
    assert_eq!(main_with_args(["fssqm", "verify", "--bogus"]), EXIT_INPUT);
}

#[test]
fn binary_honours_env_tolerance_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_fssqm"))
        .args([
            "verify",
            "--config",
            &cfg("lambda2_reference.json"),
            "--out",
        ])
        .arg(&out)
        .env("FSSQM_TOL", "1e-300")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_FAILED));
    assert!(std::fs::read_to_string(&out).unwrap().contains("FAIL"));

    let status = Command::new(env!("CARGO_BIN_EXE_fssqm"))
        .args(["verify", "--config", &cfg("lambda2_reference.json")])
        .env_remove("FSSQM_TOL")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_OK));
}
