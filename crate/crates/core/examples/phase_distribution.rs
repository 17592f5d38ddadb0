//! Transmission-phase densities: the lossless law, its weak- and
//! strong-absorption forms, and the exact law with a calibrated `P0`.
//!
//! ```bash
//! cargo run --release --example phase_distribution
//! ```

use resonance_stats::analytic::{
    phase_pdf, phase_pdf_strong, phase_pdf_weak, phase_pdf_zero_absorption, phase_rigidity_pdf, PhaseModel,
};
use resonance_stats::harness::calibrate_p0;
use resonance_stats::p0::P0Model;
use resonance_stats::rmt::EnsembleConfig;

fn main() -> resonance_stats::Result<()> {
    let eta = 1.0;
    let weak_gamma = 0.1;
    let strong_gamma = 50.0;
    let exact_weak = calibrate_p0(&EnsembleConfig::new(400, weak_gamma, 8, 0), 200_000)?;
    let exact_strong = P0Model::strong(strong_gamma)?;

    println!(
        "{:>7} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "theta", "lossless", "weak", "exact", "strong", "exact"
    );
    for i in -6..=6 {
        let th = i as f64 * 0.2;
        println!(
            "{th:>7.2} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            phase_pdf_zero_absorption(th, eta),
            phase_pdf_weak(th, eta, weak_gamma),
            phase_pdf(th, eta, &exact_weak)?,
            phase_pdf_strong(th, eta, strong_gamma),
            phase_pdf(th, eta, &exact_strong)?,
        );
    }

    println!("\nphase rigidity at eta = 3, lossless vs gamma = {weak_gamma}");
    for rho in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        println!(
            "{rho:>6.2} {:>9.4} {:>9.4}",
            phase_rigidity_pdf(rho, 3.0, PhaseModel::ZeroAbsorption)?,
            phase_rigidity_pdf(rho, 3.0, PhaseModel::Exact(&P0Model::weak(weak_gamma)?))?
        );
    }
    Ok(())
}
