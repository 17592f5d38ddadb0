use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use resonance_stats::analytic::phase_pdf_strong;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resonance-stats"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Output directories named on stdout after `->`.
fn dirs(stdout: &str) -> Vec<PathBuf> {
    stdout
        .lines()
        .filter_map(|l| l.rsplit_once("-> ").map(|(_, p)| PathBuf::from(p.trim())))
        .collect()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sample_is_deterministic_and_content_addressed() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let args = [
        "sample", "--eta", "1", "--gamma", "2", "--seed", "5", "--n-samples", "300", "--matrix-size", "60", "--out", out,
    ];
    let a = dirs(&ok(&args));
    let first = std::fs::read(a[0].join("samples.csv")).unwrap();
    let b = dirs(&ok(&args));
    assert_eq!(a, b);
    assert_eq!(first, std::fs::read(b[0].join("samples.csv")).unwrap());
    assert!(a[0].file_name().unwrap().to_str().unwrap().starts_with("sample-"));

    let m = json(&a[0].join("manifest.json"));
    assert_eq!(m["seed"], 5);
    assert_eq!(m["N"], 60);
    assert_eq!(m["n_samples"], 300);

    let other = dirs(&ok(&[
        "sample", "--eta", "1", "--gamma", "2", "--seed", "6", "--n-samples", "300", "--matrix-size", "60", "--out", out,
    ]));
    assert_ne!(a, other);
}

#[test]
fn lossless_observables_conserve_flux() {
    let tmp = tempfile::tempdir().unwrap();
    let d = dirs(&ok(&[
        "sample", "--eta", "0.7", "--gamma", "0", "--seed", "3", "--n-samples", "500", "--matrix-size", "80", "--out",
        tmp.path().to_str().unwrap(),
    ]));
    let (header, rows) = csv_rows(&d[0].join("observables.csv"));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (t, r) = (col("T"), col("R_plus"));
    assert_eq!(rows.len(), 500);
    for row in &rows {
        assert!((row[t] + row[r] - 1.0).abs() < 1e-10, "{row:?}");
    }
}

#[test]
fn eval_strong_phase_matches_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "eval", "--formula", "p_theta", "--p0", "strong", "--eta", "1", "--gamma", "20", "--grid", "-1:1:41", "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let d = dirs(&stdout);
    let (header, rows) = csv_rows(&d[0].join("density.csv"));
    assert_eq!(header, ["x", "density"]);
    assert_eq!(rows.len(), 41);
    for row in rows.iter().filter(|r| r[1] > 1e-3) {
        let closed = phase_pdf_strong(row[0], 1.0, 20.0);
        assert!((closed / row[1] - 1.0).abs() < 0.05, "theta={}: {} vs {closed}", row[0], row[1]);
    }
    assert!(d[0].join("density.json").exists());
    let mass = json(&d[0].join("normalization.json"))["integral"].as_f64().unwrap();
    assert!((mass - 1.0).abs() < 0.02, "{mass}");
}

#[test]
fn compare_refuses_mismatched_samples() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let d = dirs(&ok(&[
        "sample", "--eta", "1", "--gamma", "1", "--seed", "9", "--n-samples", "200", "--matrix-size", "50", "--out", out,
    ]));
    let samples = d[0].join("samples.csv");
    let bad = run(&[
        "compare", "--formula", "p_t", "--p0", "strong", "--eta", "1", "--gamma", "3", "--samples",
        samples.to_str().unwrap(), "--out", out,
    ]);
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains("gamma"), "{err}");

    ok(&[
        "compare", "--formula", "p_t", "--p0", "strong", "--eta", "1", "--gamma", "1", "--samples",
        samples.to_str().unwrap(), "--out", out,
    ]);
}

#[test]
fn bad_arguments_exit_with_code_two() {
    assert_eq!(run(&["eval", "--formula", "p_nope", "--eta", "1", "--gamma", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--formula", "p_t", "--eta", "-1", "--gamma", "1"]).status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    let empty = run(&["scan", "--eta", "1", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(empty.status.code(), Some(2));
}

#[test]
fn compare_lossless_transmission_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "compare", "--formula", "p_t0", "--eta", "0.5", "--gamma", "1e-4", "--seed", "11", "--n-samples", "20000",
        "--matrix-size", "200", "--out", tmp.path().to_str().unwrap(),
    ]);
    let d = dirs(&stdout);
    let report = json(&d[0].join("report.json"));
    let ks = report["ks_statistic"].as_f64().unwrap();
    assert!(ks < 0.02, "{ks}");
    let ks_row = report["criteria"].as_array().unwrap().iter().find(|c| c["name"] == "ks").unwrap();
    assert_eq!(ks_row["passed"], true);
    assert!(d[0].join("histogram.csv").exists());
    assert!(d[0].join("manifest.json").exists());
}

#[test]
fn compare_reflection_with_background_reflection() {
    let tmp = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "compare", "--formula", "p_r", "--p0", "empirical", "--n-calib", "200000", "--eta", "1", "--gamma", "1",
        "--phi", "1.0471975511965976", "--seed", "12", "--n-samples", "20000", "--out", tmp.path().to_str().unwrap(),
    ]);
    let report = json(&dirs(&stdout)[0].join("report.json"));
    let ks = report["ks_statistic"].as_f64().unwrap();
    assert!(ks < 0.02, "{ks}");
    assert!((report["params"]["r0"].as_f64().unwrap() + 0.5).abs() < 1e-12);
}

#[test]
fn compare_means_reports_amplitudes() {
    let tmp = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "compare", "--formula", "means", "--eta", "2", "--gamma", "1", "--seed", "13", "--n-samples", "20000",
        "--matrix-size", "200", "--out", tmp.path().to_str().unwrap(),
    ]);
    let report = json(&dirs(&stdout)[0].join("report.json"));
    assert_eq!(report["passed"], true, "{report:#}");
    let t = &report["summary"]["amplitudes"][0];
    let (mean, se) = (t["re"]["mean"].as_f64().unwrap(), t["re"]["mean_se"].as_f64().unwrap());
    assert!((mean - t["analytic"].as_f64().unwrap()).abs() < 4.0 * se);
}

#[test]
fn scan_variances_approach_gaussian_limit() {
    let tmp = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "scan", "--eta", "0.5,1,2", "--gamma", "10,50,100", "--seed", "14", "--n-samples", "30000", "--matrix-size",
        "2000", "--out", tmp.path().to_str().unwrap(),
    ]);
    let dir = dirs(&stdout).pop().unwrap();
    let report = json(&dir.join("scan.json"));
    let cells = report["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    for c in cells.iter().filter(|c| c["gamma"] == 100.0) {
        for key in ["variance_ratio_sqrt_t", "variance_ratio_theta"] {
            let r = c[key].as_f64().unwrap();
            assert!((r - 1.0).abs() < 0.1, "eta={} {key}={r}", c["eta"]);
        }
    }
    let (header, rows) = csv_rows(&dir.join("scan.csv"));
    assert_eq!(header[0], "eta");
    assert_eq!(rows.len(), 9);
}
