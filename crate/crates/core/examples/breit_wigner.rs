//! Clean and ensemble-averaged scattering matrices of a two-channel
//! resonance, and the dimensionless parameters they reduce to.
//!
//! ```bash
//! cargo run --release --example breit_wigner
//! ```

use resonance_stats::scales::{breit_wigner_s0, control_params, optical_s, ResonanceSpec};

fn main() -> resonance_stats::Result<()> {
    let spec = ResonanceSpec {
        epsilon0: 0.0,
        channel_amplitudes: vec![0.6, 0.4],
        gamma_spread: 0.26,
        gamma_abs: 0.01,
        level_spacing: 0.05,
    };
    let p = control_params(&spec)?;
    println!("eta = {:.4}  gamma = {:.4}  t0 = {:.4}  r0 = {:.4}", p.eta, p.gamma, p.t0, p.r0);

    println!("{:>8} {:>10} {:>10} {:>10}", "E", "|S0_12|^2", "|<S>_12|^2", "|<S>_11|^2");
    for i in -4..=4 {
        let e = 0.1 * i as f64;
        let s0 = breit_wigner_s0(e, &spec)?;
        let s = optical_s(e, &spec)?;
        println!(
            "{e:>8.2} {:>10.5} {:>10.5} {:>10.5}",
            s0[(0, 1)].norm_sqr(),
            s[(0, 1)].norm_sqr(),
            s[(0, 0)].norm_sqr()
        );
    }

    // at resonance the averaged transmission is suppressed by (1 + eta)^2
    let s = optical_s(spec.epsilon0, &spec)?;
    println!(
        "T_avg(0) / T0 = {:.6}, 1/(1+eta)^2 = {:.6}",
        s[(0, 1)].norm_sqr() / (p.t0 * p.t0),
        (1.0 + p.eta).powi(-2)
    );
    Ok(())
}
