use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use freebound::experiment::output::FORMAT_STAMP;
use freebound::geometry::parse_coefficients;
use freebound::oracle::free_radius;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freebound"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_after(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{text}"))
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn final_mean(dir: &Path) -> f64 {
    let text = fs::read_to_string(dir.join("final.coef")).unwrap();
    parse_coefficients(&text).unwrap().1.mean()
}

#[test]
fn oracle_prints_free_radius() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["oracle", "--lambda", "1", "--r-sigma", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let f = value_after(&stdout(&o), "F = ");
    assert!((f - 1.763223).abs() <= 1e-6, "{f}");
}

#[test]
fn oracle_two_point_scan_flags_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["oracle", "--two-point", "0.5", "1.9", "--p", "0.5"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("crossing regime: yes"), "{text}");
    let scan = dir.path().join("two_point_scan.csv");
    let raw = fs::read_to_string(&scan).unwrap();
    assert!(raw.starts_with(FORMAT_STAMP));
    let rows = csv_rows(&scan);
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r[0] > 1.9 && r[1].is_finite()));
    assert!(free_radius(0.5, 1.0) < 1.9);
}

#[test]
fn oracle_without_case_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = run(&["oracle", "--lambda", "1"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = run(&["oracle", "--lambda", "-1", "--r-sigma", "1"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn solve_concentric_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--r-sigma", "0.5", "--r-gamma", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let j = value_after(&stdout(&o), "J = ");
    let exact = 2.0 * std::f64::consts::PI / 2f64.ln() + 0.75 * std::f64::consts::PI;
    assert!((j - exact).abs() < 1e-8, "{j} vs {exact}");
    let rows = csv_rows(&dir.path().join("solve_traces.csv"));
    let flux = 1.0 / 2f64.ln();
    assert!(rows.iter().all(|r| (r[4] + flux).abs() < 1e-8));
}

#[test]
fn gradcheck_default_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gradcheck"], dir.path());
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(value_after(&text, "max gradient rel. error         = ") <= 1e-3);
}

#[test]
fn gradcheck_single_mode_subset() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gradcheck", "--modes", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("gradcheck.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 0.0);
}

#[test]
fn gradcheck_detects_coarse_solver() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gradcheck", "--nodes", "16"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(dir.path().join("gradcheck.csv").exists());
}

#[test]
fn optimize_zero_iterations_writes_initial_circle() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["optimize", "--K", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("final.coef")).unwrap();
    let (_, s) = parse_coefficients(&text).unwrap();
    assert_eq!(s.coeffs()[0], 0.75);
    assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
    assert!(csv_rows(&dir.path().join("trajectory.csv")).is_empty());
    assert!(!dir.path().join("snapshot_10.coef").exists());
}

#[test]
fn optimize_writes_snapshot_cadence() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["optimize", "--K", "1000", "--lambda", "7"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for n in [10, 20, 1000] {
        assert!(dir.path().join(format!("snapshot_{n}.coef")).exists());
    }
    let rows = csv_rows(&dir.path().join("trajectory.csv"));
    assert_eq!(rows.len(), 1000);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (i + 1) as f64);
        assert!(r[1] <= (1.0 + 1e-12) / (400.0 * (i + 1) as f64));
    }
}

#[test]
fn optimize_replays_bitwise_from_output_header() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let o = run(
        &["optimize", "--K", "15", "--seed", "9", "--lambda", "4"],
        &first,
    );
    assert_eq!(o.status.code(), Some(0));
    let header = first.join("trajectory.csv");
    let o = run(&["optimize", "--config", header.to_str().unwrap()], &second);
    assert_eq!(o.status.code(), Some(0));
    for name in ["trajectory.csv", "final.coef", "snapshot_10.coef"] {
        assert_eq!(
            fs::read(first.join(name)).unwrap(),
            fs::read(second.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn optimize_deterministic_with_calibrated_step_reaches_free_radius() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "optimize",
        "--deterministic",
        "--r-sigma",
        "0.5",
        "--lambda",
        "1",
        "--K",
        "2000",
        "--theta",
        "0.05",
    ];
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = final_mean(dir.path());
    assert!((r - 1.172877).abs() < 1e-3, "{r}");
}

#[test]
fn optimize_flat_amplitudes_abort_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["optimize", "--flat-amplitudes", "--K", "3"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("radial bounds"));
    assert!(dir.path().join("trajectory.csv").exists());
}

#[test]
fn rates_needs_four_grid_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "rates",
            "--deterministic",
            "--r-sigma",
            "0.5",
            "--k-grid",
            "100",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rates_deterministic_concentric_slopes() {
    // Linearized recursion e_{n+1} = (1 − θμ/n) e_n decays like n^{−θμ};
    // μ = 4πλ²(1 + 1/log(F/r_Σ)) is the curvature of J in the mean radius.
    let f = free_radius(0.5, 1.0);
    let mu = 4.0 * std::f64::consts::PI * (1.0 + 1.0 / (f / 0.5).ln());
    let theta = format!("{}", 0.5 / mu);
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "rates",
        "--deterministic",
        "--r-sigma",
        "0.5",
        "--lambda",
        "1",
        "--theta",
        &theta,
        "--k-grid",
        "100,200,500,1000,2000",
        "--seeds",
        "1",
    ];
    let o = run(&args, dir.path());
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let cost = value_after(&text, "cost_slope = ");
    let grad = value_after(&text, "gradient_slope = ");
    assert!((cost + 1.0).abs() <= 0.15, "{text}");
    assert!((grad + 0.5).abs() <= 0.15, "{text}");
    assert_eq!(csv_rows(&dir.path().join("rates_cost.csv")).len(), 5);
}

#[test]
fn coercivity_reports_positive_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["coercivity", "--samples", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(value_after(&stdout(&o), "c_E = ") > 0.0);
    assert_eq!(csv_rows(&dir.path().join("coercivity.csv")).len(), 4);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_freebound"))
        .args(["oracle", "--two-point", "0.3", "0.5"])
        .env("FREEBOUND_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("two_point_scan.csv").exists());
}
