//! End-to-end tests of the binary: output shapes, exit codes, determinism
//! and the manifest round trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tsallis-rmt"))
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("tsallis_rmt_cli_tests").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Data rows of a CSV file: everything after the `#` manifest block and the
/// header line.
fn data_rows(path: &PathBuf) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).expect("read csv");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(|c| c.to_string()).collect())
        .collect()
}

#[test]
fn surmise_tabulates_the_law() {
    let dir = temp_dir("surmise");
    let out = run(&[
        "surmise", "--beta", "1", "--q", "0", "--smax", "3", "--step", "0.01",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = data_rows(&dir.join("surmise.csv"));
    assert_eq!(rows.len(), 301);

    let mut peak_s = 0.0_f64;
    let mut peak_pdf = 0.0_f64;
    for row in &rows {
        let s: f64 = row[0].parse().unwrap();
        let pdf: f64 = row[1].parse().unwrap();
        let cdf: f64 = row[2].parse().unwrap();
        assert!(pdf >= 0.0, "negative pdf at s={s}");
        assert!((0.0..=1.0).contains(&cdf));
        if pdf > peak_pdf {
            peak_pdf = pdf;
            peak_s = s;
        }
    }
    // Analytic mode of the q = 0, beta = 1 law: 16/(5 pi) ~ 1.0186.
    assert!((peak_s - 1.019).abs() < 0.011, "pdf peak at {peak_s}");
}

#[test]
fn surmise_wigner_sentinel_routes_to_the_classical_law() {
    let dir = temp_dir("surmise_wigner");
    let out = run(&[
        "surmise", "--beta", "2", "--q", "1", "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = data_rows(&dir.join("surmise.csv"));
    // Row 89 is s = 0.89, near the classical beta = 2 peak sqrt(pi)/2;
    // expected density a s^2 exp(-b s^2) with (a, b) = (32/pi^2, 4/pi).
    let pi = std::f64::consts::PI;
    let s = 0.89_f64;
    let expected = 32.0 / (pi * pi) * s * s * (-4.0 / pi * s * s).exp();
    let got: f64 = rows[89][1].parse().unwrap();
    assert!((got - expected).abs() < 1e-3, "pdf(0.89) = {got} vs {expected}");
}

#[test]
fn oracle_is_deterministic_and_validates_input() {
    let dir_a = temp_dir("oracle_a");
    let dir_b = temp_dir("oracle_b");
    for dir in [&dir_a, &dir_b] {
        let out = run(&[
            "oracle", "--beta", "1", "--q", "0.5", "-n", "5000", "--seed", "11",
            "--out", dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(stdout(&out).contains("ks_distance = "));
    }
    let a = fs::read(dir_a.join("oracle_spacings.txt")).unwrap();
    let b = fs::read(dir_b.join("oracle_spacings.txt")).unwrap();
    assert_eq!(a, b, "same seed must give identical files");

    let out = run(&["oracle", "--beta", "1", "--q", "1", "-n", "10"]);
    assert_eq!(out.status.code(), Some(2), "q = 1 is a usage error");
    let out = run(&["oracle", "--beta", "1", "--q", "0.5", "-n", "0"]);
    assert_eq!(out.status.code(), Some(2), "n = 0 is a usage error");
}

#[test]
fn berry_tabor_outputs_and_validation() {
    let dir = temp_dir("bt");
    let out = run(&[
        "berry-tabor", "--alpha", "0.7071067811865475", "--count", "1000",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("ks_vs_q0 = "));
    let hist = data_rows(&dir.join("berry_tabor_hist.csv"));
    assert!(!hist.is_empty());
    let overlay = data_rows(&dir.join("berry_tabor_law.csv"));
    assert!(overlay.len() > 300);

    // Levels and spacings export one value per line and feed back into fit.
    let levels = fs::read_to_string(dir.join("berry_tabor_levels.txt")).unwrap();
    let n_levels = levels.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(n_levels, 1000);
    let spacings_path = dir.join("berry_tabor_spacings.txt");
    let out = run(&[
        "fit", "--input", spacings_path.to_str().unwrap(), "--beta", "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let q_hat: f64 = text
        .lines()
        .nth(1)
        .and_then(|row| row.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(q_hat <= 0.2, "ladder data should fit near q = 0, got {q_hat}");

    // Commensurate ratio: runs, dominated by degenerate spacings.
    let dir2 = temp_dir("bt_commensurate");
    let out = run(&[
        "berry-tabor", "--alpha", "0.5", "--count", "1000",
        "--out", dir2.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let hist = data_rows(&dir2.join("berry_tabor_hist.csv"));
    let zero_bin_density: f64 = hist[0][2].parse().unwrap();
    assert!(zero_bin_density > 1.0, "expected an s = 0 spike, got {zero_bin_density}");

    for bad_alpha in ["1.5", "0", "1"] {
        let out = run(&["berry-tabor", "--alpha", bad_alpha]);
        assert_eq!(out.status.code(), Some(2), "alpha = {bad_alpha}");
    }
    let out = run(&["berry-tabor", "--alpha", "0.7", "--count", "50"]);
    assert_eq!(out.status.code(), Some(2), "count below 100");
}

fn transition_args(dir: &Path) -> Vec<String> {
    [
        "transition", "--beta", "1", "--g-list", "0,0.05,1", "--n", "50",
        "--members", "3", "--seed", "5", "--out",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain([dir.to_str().unwrap().to_string()])
    .collect()
}

#[test]
fn transition_writes_table_and_histograms_deterministically() {
    let dir_a = temp_dir("transition_a");
    let dir_b = temp_dir("transition_b");
    for dir in [&dir_a, &dir_b] {
        let args = transition_args(dir);
        let out = bin().args(&args).output().expect("spawn");
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for name in [
        "transition.csv",
        "transition_hist_00.csv",
        "transition_hist_01.csv",
        "transition_hist_02.csv",
    ] {
        let a = fs::read(dir_a.join(name)).unwrap();
        let b = fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} must be byte-identical across reruns");
    }
    let rows = data_rows(&dir_a.join("transition.csv"));
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row.len(), 4, "g,q_hat,objective,at_boundary");
        let q: f64 = row[1].parse().unwrap();
        assert!((0.0..=1.0).contains(&q));
    }
    // The chaotic end must sit well above the regular end.
    let q0: f64 = rows[0][1].parse().unwrap();
    let q1: f64 = rows[2][1].parse().unwrap();
    assert!(q0 <= 0.3 && q1 >= 0.7, "q(0) = {q0}, q(1) = {q1}");
}

#[test]
fn transition_manifest_round_trip_reproduces_outputs() {
    let dir = temp_dir("transition_manifest");
    let args = transition_args(&dir);
    let out = bin().args(&args).output().expect("spawn");
    assert!(out.status.success(), "{}", stderr(&out));

    let manifest = fs::read_to_string(dir.join("manifest.txt")).unwrap();
    let rerun_line = manifest
        .lines()
        .find_map(|l| l.strip_prefix("rerun = "))
        .expect("manifest records a rerun command");
    let dir2 = temp_dir("transition_manifest_rerun");
    let mut rerun_args: Vec<&str> = rerun_line.split_whitespace().collect();
    rerun_args.push("--out");
    rerun_args.push(dir2.to_str().unwrap());
    let out = bin().args(&rerun_args).output().expect("spawn rerun");
    assert!(out.status.success(), "{}", stderr(&out));

    for name in ["transition.csv", "transition_hist_01.csv"] {
        let a = fs::read(dir.join(name)).unwrap();
        let b = fs::read(dir2.join(name)).unwrap();
        assert_eq!(a, b, "{name} must be reproduced from the manifest");
    }
}

#[test]
fn fit_reads_files_and_reports_errors_with_line_numbers() {
    let dir = temp_dir("fit");
    let out = run(&[
        "oracle", "--beta", "1", "--q", "0.5", "-n", "20000", "--seed", "2",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let spacings = dir.join("oracle_spacings.txt");

    for method in ["hist-ls", "mle"] {
        let out = run(&[
            "fit", "--input", spacings.to_str().unwrap(), "--beta", "1",
            "--method", method,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        let row = text.lines().nth(1).expect("csv row");
        let q_hat: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((q_hat - 0.5).abs() < 0.08, "{method}: q_hat = {q_hat}");
    }

    let bad = dir.join("bad.txt");
    fs::write(&bad, "1.0\n0.9\n-0.5\n1.1\n").unwrap();
    let out = run(&["fit", "--input", bad.to_str().unwrap(), "--beta", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));

    let short = dir.join("short.txt");
    fs::write(&short, "1.0\n").unwrap();
    let out = run(&["fit", "--input", short.to_str().unwrap(), "--beta", "1"]);
    assert_eq!(out.status.code(), Some(3));

    let missing = dir.join("missing.txt");
    let out = run(&["fit", "--input", missing.to_str().unwrap(), "--beta", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fit_mle_flags_support_violation() {
    let dir = temp_dir("fit_outlier");
    let mut body = String::new();
    for _ in 0..999 {
        body.push_str("1.0\n");
    }
    body.push_str("50.0\n");
    let path = dir.join("outlier.txt");
    fs::write(&path, body).unwrap();
    let out = run(&[
        "fit", "--input", path.to_str().unwrap(), "--beta", "1", "--method", "mle",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let row = text.lines().nth(1).expect("csv row");
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[0], "mle");
    assert_eq!(cols[1], "1", "q_hat pinned at the Gaussian limit");
    assert_eq!(cols[4], "false", "feasible flag");
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["surmise", "--beta", "1", "--q", "0", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["surmise", "--beta", "3", "--q", "0"]);
    assert_eq!(out.status.code(), Some(2), "beta = 3 rejected");
}

#[test]
fn symplectic_class_is_rejected_where_unsupported() {
    // The beta = 4 laws exist, but there is no matrix or oracle generator.
    let out = run(&["oracle", "--beta", "4", "--q", "0.5", "-n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["transition", "--beta", "4", "--n", "20", "--members", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // ...while surmise and fit accept it.
    let dir = temp_dir("beta4");
    let out = run(&[
        "surmise", "--beta", "4", "--q", "0.3", "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}
