//! Transmission distribution with a calibrated `P0`, tabulated and compared
//! bin by bin with a Monte Carlo histogram.
//!
//! ```bash
//! cargo run --release --example transmission_distribution
//! ```

use resonance_stats::analytic::{AxisSpec, Evaluator, FormulaId, PdfGrid};
use resonance_stats::harness::{calibrate_p0, Histogram, TabulatedCdf};
use resonance_stats::observables::evaluate;
use resonance_stats::rmt::{sample_stream, EnsembleConfig};
use resonance_stats::scales::ControlParams;

fn main() -> resonance_stats::Result<()> {
    let params = ControlParams::perfect(0.5, 1.0);
    let ens = EnsembleConfig::new(400, params.gamma, 21, 40_000);
    let p0 = calibrate_p0(&ens, 200_000)?;
    let ev = Evaluator::new(FormulaId::Transmission, params, Some(p0))?;

    let t: Vec<f64> = sample_stream(&ens)?
        .iter()
        .map(|s| evaluate(s, &params).transmission)
        .collect();
    let hist = Histogram::new(&t, 0.0, 1.0, 20)?;
    println!("{:>6} {:>9} {:>9}", "T", "MC", "analytic");
    for (c, d) in hist.centers().iter().zip(&hist.densities) {
        println!("{c:>6.3} {d:>9.4} {:>9.4}", ev.density(*c)?);
    }

    let cdf = TabulatedCdf::build(|x| ev.density(x), 0.0, 1.0, 256)?;
    println!("KS distance {:.4}, analytic mass {:.8}", cdf.ks(&t)?, cdf.mass);

    let grid = PdfGrid::tabulate_1d(&ev, AxisSpec::new(0.0, 1.0, 101)?)?;
    println!("grid of {} points, trapezoid mass {:.5}", grid.densities.len(), grid.trapezoid());
    Ok(())
}
