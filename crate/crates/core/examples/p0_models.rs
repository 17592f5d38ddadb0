//! Closed-form and calibrated densities of `x = (u^2 + v^2 + 1) / (2v)`.
//!
//! ```bash
//! cargo run --release --example p0_models
//! ```

use resonance_stats::harness::calibrate_p0;
use resonance_stats::p0::P0Model;
use resonance_stats::rmt::EnsembleConfig;

fn main() -> resonance_stats::Result<()> {
    for gamma in [0.2, 5.0, 40.0] {
        let empirical = calibrate_p0(&EnsembleConfig::new(400, gamma, 3, 0), 200_000)?;
        let weak = P0Model::weak(gamma)?;
        let strong = P0Model::strong(gamma)?;
        println!(
            "gamma = {gamma}: tail rate {:.4}, cut at x = {:.3}",
            empirical.tail_slope().unwrap_or(f64::NAN),
            empirical.tail_cut().unwrap_or(f64::NAN)
        );
        println!("  {:>8} {:>11} {:>11} {:>11}", "x", "empirical", "weak", "strong");
        let cut = empirical.tail_cut().unwrap_or(2.0);
        for f in [0.01, 0.05, 0.2, 0.5, 1.0, 1.5] {
            let x = 1.0 + (cut - 1.0) * f;
            println!(
                "  {x:>8.4} {:>11.4e} {:>11.4e} {:>11.4e}",
                empirical.density(x),
                weak.density(x),
                strong.density(x)
            );
        }
    }
    let model = calibrate_p0(&EnsembleConfig::new(400, 1.0, 3, 0), 50_000)?;
    let back = P0Model::from_json(&model.to_json()?)?;
    println!("json round trip exact: {}", back == model);
    Ok(())
}
