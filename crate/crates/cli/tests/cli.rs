//! End-to-end tests against the built `fef` binary.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use fef_cli::matrix_file::{write_matrix_file, MatrixFile};
use fef_core::states;

fn fef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).trim().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert!(fef(&["--help"]).status.success());
    assert!(fef(&["--version"]).status.success());
    assert!(fef(&["report", "--help"]).status.success());
}

#[test]
fn usage_errors_are_single_line_with_code() {
    let out = fef(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_line(&out);
    assert!(err.starts_with("error[E-USAGE]:"), "got: {err}");
    assert_eq!(err.lines().count(), 1);

    let out = fef(&["report"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[E-USAGE]:"));

    let out = fef(&["report", "--state", "isotropic", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).contains("--theta"));
}

#[test]
fn domain_errors_exit_nonzero() {
    let out = fef(&["report", "--state", "example1", "--a", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).starts_with("error[E-DOMAIN]:"));

    let out = fef(&["sweep", "--family", "phix", "--from", "0.0", "--to", "0.9", "--steps", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).starts_with("error[E-DOMAIN]:"));
}

#[test]
fn file_errors_carry_codes() {
    let out = fef(&["report", "--file", "/nonexistent/state.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).starts_with("error[E-IO]:"));

    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, b"{ not json").unwrap();
    let out = fef(&["report", "--file", bad_json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).starts_with("error[E-PARSE]:"));

    // Valid JSON, invalid state (trace 2).
    let rho = states::max_entangled(2).unwrap();
    let mut encoded = MatrixFile::from_density(&rho);
    for row in &mut encoded.matrix {
        for entry in row {
            entry[0] *= 2.0;
            entry[1] *= 2.0;
        }
    }
    let path = dir.path().join("trace2.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(f, "{}", serde_json::to_string(&encoded).unwrap()).unwrap();
    let out = fef(&["report", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).starts_with("error[E-VALIDATE]:"));
}

#[test]
fn report_from_matrix_file_matches_family_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    let rho = states::isotropic(2, 0.25).unwrap();
    write_matrix_file(&path, &rho).unwrap();

    let from_file = fef(&["report", "--file", path.to_str().unwrap(), "--json"]);
    assert!(from_file.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    let report = &doc["report"];
    assert_eq!(report["dim"], 2);
    // f = (1 + 3θ)/4 at θ = 0.25.
    let f = report["singlet_fraction"].as_f64().unwrap();
    assert!((f - (1.0 + 3.0 * 0.25) / 4.0).abs() < 1e-12);
    assert!(report["two_qubit_exact"].as_f64().is_some());
    assert!(doc["optimization"].is_null());
}

#[test]
fn isotropic_report_text_includes_distillability_and_exact_value() {
    let out = fef(&["report", "--state", "isotropic", "--d", "3", "--theta", "0.7"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("0.733333333333"), "text: {text}");
    assert!(text.contains("distillable (isotropic):"));
    assert!(text.contains("true"));
    assert!(text.contains("useful for teleportation:"));
}

#[test]
fn json_report_has_optimization_metadata() {
    let out = fef(&[
        "report", "--state", "phix", "--x", "0.25", "--optimize", "--restarts", "4", "--seed", "9",
        "--json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["optimization"]["restarts"], 4);
    assert_eq!(doc["optimization"]["seed"], 9);
    assert!(doc["report"]["numeric_fef"].as_f64().is_some());
    assert!(doc["fef_known"].as_f64().is_some());
}

#[test]
fn sweep_csv_header_and_shape() {
    let out = fef(&["sweep", "--family", "rho3", "--steps", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,f,thm1,cor1,prior,fef_numeric,fef_exact");
    assert_eq!(lines.len(), 6);
    // rho3 is in the diagonal class: fef_exact column filled.
    assert!(!lines[1].ends_with(','));
}

#[test]
fn sweep_without_optimizer_is_byte_deterministic() {
    let a = fef(&["sweep", "--family", "example1", "--steps", "17"]);
    let b = fef(&["sweep", "--family", "example1", "--steps", "17"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_writes_file_when_out_given() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = fef(&[
        "sweep", "--family", "isotropic", "--d", "2", "--steps", "9", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("param,f,thm1,cor1,prior"));
    assert_eq!(body.lines().count(), 10);
}

#[test]
fn threshold_search_prints_roots_to_stderr() {
    let out = fef(&[
        "sweep", "--family", "example2", "--steps", "21", "--find-threshold",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    let roots: Vec<&str> = err.lines().filter(|l| l.starts_with("threshold:")).collect();
    assert_eq!(roots.len(), 2, "stderr: {err}");
    // CSV on stdout stays intact.
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.starts_with("param,"));
}

#[test]
fn verify_fast_exits_zero_and_reports_all_suites() {
    let out = fef(&["verify", "--level", "fast"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("15/15 suites passed"), "stdout: {text}");
}

#[test]
fn report_out_file_matches_json_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path: &Path = &dir.path().join("report.json");
    let to_file = fef(&[
        "report", "--state", "rho3", "--y", "0.4", "--json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    let from_file = std::fs::read(path).unwrap();
    assert_eq!(to_file.stdout, from_file);
}
