//! Draws the local Green's function `K = u - i v` of an absorbing GOE
//! background and checks its basic statistics.
//!
//! ```bash
//! cargo run --release --example sample_greens -- 0.5
//! ```

use resonance_stats::harness::{Binning, Histogram, SampleSummary};
use resonance_stats::rmt::{sample_stream, EnsembleConfig};

fn main() -> resonance_stats::Result<()> {
    let gamma: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let ens = EnsembleConfig::new(400, gamma, 11, 50_000);
    let samples = sample_stream(&ens)?;

    let v: Vec<f64> = samples.iter().map(|s| s.v).collect();
    let u: Vec<f64> = samples.iter().map(|s| s.u).collect();
    let sv = SampleSummary::new(&v)?;
    let su = SampleSummary::new(&u)?;
    println!("gamma = {gamma}, {} samples at N = {}", samples.len(), ens.n_levels);
    println!("<v> = {:.4} +- {:.4}", sv.mean, sv.mean_se);
    println!("<u> = {:.4} +- {:.4}", su.mean, su.mean_se);

    let x: Vec<f64> = samples.iter().map(|s| s.x).collect();
    let h = Histogram::with_binning(&x, 1.0, 100.0, 10, Binning::Log)?;
    println!("\n  x range            density");
    for (i, d) in h.densities.iter().enumerate() {
        println!("  [{:8.2}, {:8.2})  {d:.3e}", h.edges[i], h.edges[i + 1]);
    }
    println!("  beyond x = 100: {} samples", h.overflow);
    Ok(())
}
