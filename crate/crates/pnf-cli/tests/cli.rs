//! End-to-end runs of the `pnf` binary: exit-code contract, report
//! shape, and the CSV round-trip guarantee of `analyze`.

use pnf_cli::formats;
use pnf_core::{
    atom_measure, locate_divisor, solve_missing_length, DirichletSeries, SelbergData,
    TestFunction, DEFAULT_LATTICE_BUDGET,
};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn zeros_table() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/zeta_zeros_10k.txt")
}

#[test]
fn newton_identities_for_integer_quadratic_pass() {
    let out = pnf(&["verify-newton", "--poly", "1,-3,2", "--mmax", "8"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    let list = reports.as_array().expect("array of reports");
    assert_eq!(list.len(), 8);
    for report in list {
        assert_eq!(report["pass"], Value::Bool(true));
        assert_eq!(report["abs_err"], 0.0);
    }
}

#[test]
fn malformed_polynomial_is_a_usage_error() {
    let out = pnf(&["verify-newton", "--poly", "1,oops,2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn missing_series_file_is_a_data_error() {
    let out = pnf(&[
        "verify-pn",
        "--series",
        "no-such-file.json",
        "--test",
        "gaussian:center=0,width=1",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn unattainable_tolerance_exits_one_with_a_failed_report() {
    let dir = tempfile::tempdir().unwrap();
    let series = write_temp(&dir, "f.json", &DirichletSeries::geometric_factor(1.0).to_json());
    let out = pnf(&[
        "verify-pn",
        "--series",
        series.to_str().unwrap(),
        "--test",
        "bump:center=1,width=0.3",
        "--height",
        "60",
        "--cutoff",
        "3",
        "--tolerance",
        "1e-17",
    ]);
    assert_eq!(exit_code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    assert_eq!(reports[0]["pass"], Value::Bool(false));
}

#[test]
fn tolerance_outside_unit_interval_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let series = write_temp(&dir, "f.json", &DirichletSeries::geometric_factor(1.0).to_json());
    let out = pnf(&[
        "verify-pn",
        "--series",
        series.to_str().unwrap(),
        "--test",
        "gaussian:center=0,width=1",
        "--tolerance",
        "2.0",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn classical_poisson_passes_for_small_ladder() {
    let out = pnf(&[
        "verify-poisson",
        "--lambda",
        "2",
        "--test",
        "bump:center=0,width=0.5",
        "--height",
        "400",
        "--tolerance",
        "1e-4",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    assert_eq!(reports[0]["scenario"], "classical-poisson");
}

#[test]
fn detect_fe_prints_mu_and_c_for_palindromic_series() {
    let dir = tempfile::tempdir().unwrap();
    let series = DirichletSeries::new(
        vec![1.0, 2.0],
        vec![pnf_core::Complex64::new(2.0, 0.0), pnf_core::Complex64::new(1.0, 0.0)],
        None,
        None,
    )
    .unwrap();
    let path = write_temp(&dir, "pal.json", &series.to_json());
    let out = pnf(&["detect-fe", "--series", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let info = stdout_json(&out);
    assert_eq!(info["has_fe"], Value::Bool(true));
    assert!(info["mu"].as_f64().is_some() && info["c"].as_f64().is_some());
}

#[test]
fn detect_fe_rejects_incommensurable_series() {
    let dir = tempfile::tempdir().unwrap();
    let series = DirichletSeries::new(
        vec![1.0, 2.5],
        vec![pnf_core::Complex64::new(0.5, 0.0), pnf_core::Complex64::new(0.25, 0.0)],
        None,
        None,
    )
    .unwrap();
    let path = write_temp(&dir, "nofe.json", &series.to_json());
    let out = pnf(&["detect-fe", "--series", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["has_fe"], Value::Bool(false));
}

#[test]
fn analyze_csv_round_trips_against_in_memory_values() {
    let dir = tempfile::tempdir().unwrap();
    let series = DirichletSeries::geometric_factor(1.0);
    let series_path = write_temp(&dir, "f.json", &series.to_json());
    let divisor_path = dir.path().join("divisor.csv");
    let atoms_path = dir.path().join("atoms.csv");
    let out = pnf(&[
        "analyze",
        "--series",
        series_path.to_str().unwrap(),
        "--height",
        "40",
        "--cutoff",
        "5",
        "--divisor-out",
        divisor_path.to_str().unwrap(),
        "--atoms-out",
        atoms_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let reimported =
        formats::parse_divisor_csv(&std::fs::read_to_string(&divisor_path).unwrap()).unwrap();
    let in_memory = locate_divisor(&series, 40.0).unwrap();
    assert_eq!(reimported, in_memory.points());

    let atoms = formats::parse_atoms_csv(&std::fs::read_to_string(&atoms_path).unwrap()).unwrap();
    let in_memory_atoms = atom_measure(&series, 5.0, DEFAULT_LATTICE_BUDGET).unwrap();
    assert_eq!(atoms.len(), in_memory_atoms.atoms.len());
    for (got, want) in atoms.iter().zip(&in_memory_atoms.atoms) {
        assert!(got.0 == want.frequency && got.1 == want.weight);
    }
}

#[test]
fn explicit_formula_from_bundled_table() {
    assert!(Path::new(zeros_table()).exists(), "bundled table present");
    let out = pnf(&[
        "verify-explicit",
        "--zeros",
        zeros_table(),
        "--primes",
        "10000",
        "--max-zeros",
        "100",
        "--test",
        "gaussian:center=0,width=1",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    assert_eq!(reports[0]["scenario"], "explicit-formula");
    assert_eq!(reports[0]["params"]["zero_count"], 100);
}

#[test]
fn selberg_fixture_via_json_file() {
    let phi = TestFunction::gaussian(1.5, 0.1).unwrap();
    let base = SelbergData {
        genus: 2,
        eigen_gammas: vec![4.19, 30.0, 60.0, 100.0, 160.0, 260.0, 420.0, 640.0, 770.0],
        lengths: vec![0.7, 1.1, 2.5],
    };
    let solved = solve_missing_length(&base, &phi, (1.55, 1.95)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "surface.json", &solved.to_json());
    let report_path = dir.path().join("report.json");
    let out = pnf(&[
        "verify-selberg",
        "--data",
        path.to_str().unwrap(),
        "--test",
        "gaussian:center=1.5,width=0.1",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(written[0]["scenario"], "selberg-instance");
    assert_eq!(written[0]["pass"], Value::Bool(true));
}

#[test]
fn pnf_threads_caps_the_pool_and_bad_values_are_usage_errors() {
    let ok = Command::new(env!("CARGO_BIN_EXE_pnf"))
        .env("PNF_THREADS", "1")
        .args(["verify-newton", "--poly", "1,-3,2", "--mmax", "4"])
        .output()
        .expect("binary runs");
    assert_eq!(ok.status.code(), Some(0));

    let bad = Command::new(env!("CARGO_BIN_EXE_pnf"))
        .env("PNF_THREADS", "zero")
        .args(["verify-newton", "--poly", "1,-3,2", "--mmax", "4"])
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(2));
}
