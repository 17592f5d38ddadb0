//! Dense GOE diagonalisation and the tridiagonal continued fraction draw the
//! same local Green's function; the tridiagonal path is much cheaper.
//!
//! ```bash
//! cargo run --release --example sampler_equivalence
//! ```

use std::time::Instant;

use resonance_stats::harness::{ks_critical_two_sample, ks_two_sample};
use resonance_stats::rmt::{sample_stream, EnsembleConfig, Sampler};

fn main() -> resonance_stats::Result<()> {
    let n = 5_000;
    let mut xs = Vec::new();
    for (sampler, seed) in [(Sampler::DenseGoe, 1), (Sampler::TridiagonalBeta1, 2)] {
        let cfg = EnsembleConfig::new(200, 1.0, seed, n).with_sampler(sampler);
        let start = Instant::now();
        let x: Vec<f64> = sample_stream(&cfg)?.iter().map(|s| s.x).collect();
        println!("{sampler}: {n} samples in {:.2?}", start.elapsed());
        xs.push(x);
    }
    let d = ks_two_sample(&xs[0], &xs[1])?;
    println!("two-sample KS {d:.4}, 1% critical value {:.4}", ks_critical_two_sample(n, n, 0.01));
    Ok(())
}
