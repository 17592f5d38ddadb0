//! Joint densities of `(T, theta)` at strong absorption: the asymptotic form
//! and the Rician approximation, each scored by its L1 distance to a Monte
//! Carlo histogram.
//!
//! ```bash
//! cargo run --release --example joint_distributions
//! ```

use resonance_stats::analytic::{joint_ttheta_asymptotic, joint_ttheta_rician};
use resonance_stats::harness::compare::fit_box;
use resonance_stats::harness::stats::{cell_masses_2d, l1_histogram_2d};
use resonance_stats::harness::Histogram2d;
use resonance_stats::observables::evaluate;
use resonance_stats::rmt::{sample_stream, EnsembleConfig};
use resonance_stats::scales::ControlParams;

fn main() -> resonance_stats::Result<()> {
    let gamma = 50.0;
    for eta in [0.3, 1.0, 3.0] {
        let params = ControlParams::perfect(eta, gamma);
        let pts: Vec<(f64, f64)> = sample_stream(&EnsembleConfig::new(400, gamma, 13, 40_000))?
            .iter()
            .map(|s| {
                let p = evaluate(s, &params);
                (p.transmission, p.theta_t)
            })
            .collect();
        let support = [(0.0, 1.0), (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)];
        let [bx, by] = fit_box(&pts, &support);
        let hist = Histogram2d::new(&pts, bx, by, (40, 40))?;
        let asym = cell_masses_2d(&hist, |t, th| Ok(joint_ttheta_asymptotic(t, th, eta, gamma)))?;
        let rice = cell_masses_2d(&hist, |t, th| Ok(joint_ttheta_rician(t, th, eta, gamma)))?;
        println!(
            "eta = {eta}: L1 asymptotic {:.4}, Rician {:.4}",
            l1_histogram_2d(&hist, &asym),
            l1_histogram_2d(&hist, &rice)
        );
    }
    Ok(())
}
