//! Maps Green's-function samples to transmission, reflection and phases,
//! and checks the exact identities every sample must satisfy.
//!
//! ```bash
//! cargo run --release --example observables
//! ```

use resonance_stats::observables::{
    evaluate, mat2_max_abs_diff, mean_amplitudes, unitarity_deficit_matrix, zero_absorption_check, clean_s_matrix,
};
use resonance_stats::rmt::{sample_stream, EnsembleConfig};
use num_complex::Complex64;
use resonance_stats::scales::ControlParams;

fn main() -> resonance_stats::Result<()> {
    let params = ControlParams::from_phi(2.0, 1.0, std::f64::consts::FRAC_PI_8);
    let samples = sample_stream(&EnsembleConfig::new(200, params.gamma, 5, 20_000))?;

    let s0 = clean_s_matrix(&params);
    let mut worst = 0.0f64;
    for s in &samples {
        let p = evaluate(s, &params);
        let lhs = unitarity_deficit_matrix(s, &params);
        let mut rhs = s0;
        for (i, row) in rhs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = (if i == j { 1.0 } else { 0.0 } - *c) * p.deficit;
            }
        }
        worst = worst.max(mat2_max_abs_diff(&lhs, &rhs));
    }
    println!("max |1 - S^+S - (1 - S0) d| over {} samples: {worst:.2e}", samples.len());

    let n = samples.len() as f64;
    let (mut t, mut rp, mut rm) = (Complex64::default(), Complex64::default(), Complex64::default());
    for s in &samples {
        let p = evaluate(s, &params);
        t += p.t / n;
        rp += p.r_plus / n;
        rm += p.r_minus / n;
    }
    let (et, erp, erm) = mean_amplitudes(&params);
    println!("<t>  = {t:.4}  expected {et:.4}");
    println!("<r+> = {rp:.4}  expected {erp:.4}");
    println!("<r-> = {rm:.4}  expected {erm:.4}");

    let lossless = ControlParams::from_t0(0.7, 0.0, 0.8, 1.0)?;
    let samples = sample_stream(&EnsembleConfig::new(200, 0.0, 6, 2_000))?;
    let failures = samples
        .iter()
        .map(|s| zero_absorption_check(&evaluate(s, &lossless), &lossless, 1e-10))
        .filter(|r| !matches!(r, Ok(rep) if rep.passed))
        .count();
    println!("lossless constraint violations: {failures} of {}", samples.len());
    Ok(())
}
