//! End-to-end validation run: sample, compare with an analytic law, score
//! against the default criteria and write the run directory.
//!
//! ```bash
//! cargo run --release --example compare_report -- /tmp/resonance-runs
//! ```

use std::path::PathBuf;

use resonance_stats::analytic::FormulaId;
use resonance_stats::harness::{compare, scan, CompareConfig, Criteria, P0Source, ScanConfig};
use resonance_stats::io::{self, Manifest};
use resonance_stats::rmt::EnsembleConfig;
use resonance_stats::scales::ControlParams;

fn main() -> resonance_stats::Result<()> {
    let root = io::output_root(std::env::args().nth(1).map(PathBuf::from).as_deref());
    let criteria = Criteria::default();

    let params = ControlParams::perfect(1.0, 0.1);
    let ens = EnsembleConfig::new(400, params.gamma, 2024, 100_000);
    let cfg = CompareConfig::new(ens, params, FormulaId::PhaseWeak, P0Source::None);
    let out = compare(&cfg, &criteria)?;
    for c in &out.report.criteria {
        println!("{:<24} {:.5} <= {:.5}  {}", c.name, c.value, c.threshold, if c.passed { "PASS" } else { "FAIL" });
    }

    let dir = io::run_dir(&root, "compare", &cfg)?;
    io::write_json(&dir.join("report.json"), &out.report)?;
    io::write_samples(&dir.join("samples.csv"), &out.samples)?;
    io::write_observables(&dir.join("observables.csv"), &out.points)?;
    Manifest::new(&ens, &params, serde_json::to_value(&cfg)?).save(&dir.join("manifest.json"))?;
    println!("wrote {}", dir.display());

    let sc = ScanConfig {
        etas: vec![0.5, 2.0],
        gammas: vec![100.0],
        ensemble: EnsembleConfig::new(400, 100.0, 7, 20_000),
        params,
    };
    let report = scan(&sc, &criteria, false)?;
    for cell in &report.cells {
        println!(
            "eta = {}: Var(sqrt T) ratio {:.3}, Var(theta) ratio {:.3}",
            cell.eta,
            cell.variance_ratio_sqrt_t.unwrap_or(f64::NAN),
            cell.variance_ratio_theta.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
