//! Transmission phase, joint intensity-phase, and phase-rigidity laws
//! (perfect coupling, `t0 = 1`).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::intensity::quad_opts;
use super::quad::integrate_piecewise;
use crate::error::{Error, Result};
use crate::p0::P0Model;
use crate::special::{bessel_k0_scaled, bessel_k1_scaled, erfc};

/// Lossless phase density `1 / (pi (eta cos^2 + sin^2 / eta))`.
pub fn phase_pdf_zero_absorption(theta: f64, eta: f64) -> f64 {
    if !(theta.abs() < FRAC_PI_2) {
        return 0.0;
    }
    let (s, c) = theta.sin_cos();
    1.0 / (PI * (eta * c * c + s * s / eta))
}

/// `x` as a function of `(T, theta)`.
pub fn x_ttheta(t: f64, theta: f64, eta: f64) -> f64 {
    let st = t.sqrt();
    let c = theta.cos();
    (t * (1.0 + eta * eta) - 2.0 * st * c + 1.0) / (2.0 * eta * st * (c - st))
}

/// Joint density of `(T, theta)`; zero outside `0 <= T < cos^2 theta`.
pub fn joint_ttheta_pdf(t: f64, theta: f64, eta: f64, p0: &P0Model) -> f64 {
    let st = t.sqrt();
    let c = theta.cos();
    if !(t > 0.0 && theta.abs() < FRAC_PI_2 && c > st) {
        return 0.0;
    }
    let gap = c - st;
    p0.density(x_ttheta(t, theta, eta)) / (4.0 * PI * t * gap * gap)
}

/// Strong-absorption form of the joint density; keeps the exact support.
pub fn joint_ttheta_asymptotic(t: f64, theta: f64, eta: f64, gamma: f64) -> f64 {
    let st = t.sqrt();
    let c = theta.cos();
    if !(t > 0.0 && theta.abs() < FRAC_PI_2 && c > st) {
        return 0.0;
    }
    let mean_t = 1.0 / (1.0 + eta);
    let gap = c - st;
    let q = (t - 2.0 * mean_t * st * c + mean_t * mean_t) / (st * gap);
    gamma * (-gamma * (1.0 + eta).powi(2) / (8.0 * eta) * q).exp() / (16.0 * PI * t * gap * gap)
}

/// Rician approximation: `t_r - <t>` and `t_i` independent normals of
/// variance `sigma_T^2`. Positive on the whole `(T, theta)` plane.
pub fn joint_ttheta_rician(t: f64, theta: f64, eta: f64, gamma: f64) -> f64 {
    if !(t >= 0.0) {
        return 0.0;
    }
    let g = gaussian_limit_params(eta, gamma);
    let q = t - 2.0 * g.mean_t * t.sqrt() * theta.cos() + g.mean_t * g.mean_t;
    (-q / (2.0 * g.sigma2_t)).exp() / (4.0 * PI * g.sigma2_t)
}

/// `x(p, theta)` of the phase integral, written with `s = sec^2 theta`.
fn x_phase(p: f64, sec2: f64, eta: f64) -> f64 {
    ((1.0 + p).powi(2) * sec2 - 2.0 * p + eta * eta - 1.0) / (2.0 * eta * p)
}

/// Exact phase density
/// `sec^2/(2 pi) int_0^inf dp (1+p)/p^2 P0(x(p, theta))`.
///
/// Evaluated in `s = ln p`, split at `p = 1`, over the `p` window where the
/// `P0` argument stays below the model's cutoff.
pub fn phase_pdf(theta: f64, eta: f64, p0: &P0Model) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta = {eta} must be > 0")));
    }
    if !(theta.abs() < FRAC_PI_2) {
        return Ok(0.0);
    }
    let sec2 = 1.0 / theta.cos().powi(2);
    let x_max = p0.upper_cutoff();
    // x(p) <= x_max  <=>  sec2 p^2 + b p + c <= 0
    let b = 2.0 * sec2 - 2.0 - 2.0 * eta * x_max;
    let c = sec2 + eta * eta - 1.0;
    let disc = b * b - 4.0 * sec2 * c;
    if disc <= 0.0 || c <= 0.0 {
        return Ok(0.0);
    }
    let p_hi = (-b + disc.sqrt()) / (2.0 * sec2);
    let p_lo = c / (sec2 * p_hi);
    let (s_lo, s_hi) = (p_lo.ln(), p_hi.ln());
    let f = |s: f64| {
        let p = s.exp();
        (1.0 + 1.0 / p) * p0.density(x_phase(p, sec2, eta))
    };
    // both roots p of x(p) = x_k for every P0 kink, plus p = 1
    let mut breaks = vec![0.0];
    for &xk in p0.kinks() {
        let bk = 2.0 * sec2 - 2.0 - 2.0 * eta * xk;
        let dk = bk * bk - 4.0 * sec2 * c;
        if dk > 0.0 {
            let hi = (-bk + dk.sqrt()) / (2.0 * sec2);
            breaks.push(hi.ln());
            breaks.push((c / (sec2 * hi)).ln());
        }
    }
    let total = integrate_piecewise(f, s_lo, s_hi, &breaks, &quad_opts())?.value;
    Ok(sec2 / (2.0 * PI) * total)
}

/// Small-`gamma` phase density:
/// `P0(theta) [erfc(sqrt mu) + 2 sqrt(mu/pi) e^-mu]`,
/// `mu = gamma/(4 eta) (sec^2 theta - 1 + eta)`.
pub fn phase_pdf_weak(theta: f64, eta: f64, gamma: f64) -> f64 {
    if !(theta.abs() < FRAC_PI_2) {
        return 0.0;
    }
    let sec2 = 1.0 / theta.cos().powi(2);
    let mu = gamma / (4.0 * eta) * (sec2 - 1.0 + eta);
    phase_pdf_zero_absorption(theta, eta) * (erfc(mu.sqrt()) + 2.0 * (mu / PI).sqrt() * (-mu).exp())
}

/// Large-`gamma` phase density in modified Bessel functions; computed with
/// exponentially scaled `K0`, `K1` so that `e^{-(xi + nu)}` never overflows.
pub fn phase_pdf_strong(theta: f64, eta: f64, gamma: f64) -> f64 {
    if !(theta.abs() < FRAC_PI_2) {
        return 0.0;
    }
    let sec2 = 1.0 / theta.cos().powi(2);
    let g = gamma / (4.0 * eta);
    let xi = g * (sec2 * (sec2 - 1.0 + eta * eta)).sqrt();
    let nu = g * (sec2 - 1.0 - eta);
    let damp = (-(xi + nu)).exp();
    if damp == 0.0 {
        return 0.0;
    }
    let pref = gamma * sec2 / (4.0 * PI);
    pref * (bessel_k0_scaled(xi) + gamma * sec2 / (4.0 * eta * xi) * bessel_k1_scaled(xi)) * damp
}

/// Means and variances of the Gaussian strong-absorption limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLimitParams {
    pub mean_t: f64,
    /// Variance of `sqrt T` (and of `t_r`, `t_i`).
    pub sigma2_t: f64,
    /// Variance of the transmission phase.
    pub sigma2_theta: f64,
}

pub fn gaussian_limit_params(eta: f64, gamma: f64) -> GaussianLimitParams {
    let k = 1.0 + eta;
    GaussianLimitParams {
        mean_t: 1.0 / k,
        sigma2_t: 4.0 * eta * eta / (gamma * k.powi(4)),
        sigma2_theta: 4.0 * eta * eta / (gamma * k * k),
    }
}

/// Which phase law feeds the phase-rigidity density.
#[derive(Debug, Clone, Copy)]
pub enum PhaseModel<'a> {
    Exact(&'a P0Model),
    ZeroAbsorption,
}

/// Density of the phase rigidity `rho = cos 2 theta`.
///
/// The phase law is even, so both branches `±theta` contribute equally and
/// `P(rho) = P(theta) / sqrt(1 - rho^2)` at `sec^2 theta = 2 / (1 + rho)`.
pub fn phase_rigidity_pdf(rho: f64, eta: f64, model: PhaseModel<'_>) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Ok(0.0);
    }
    match model {
        PhaseModel::ZeroAbsorption => Ok(2.0
            / (PI * (1.0 - rho * rho).sqrt() * (eta + 1.0 / eta + (eta - 1.0 / eta) * rho))),
        PhaseModel::Exact(p0) => {
            let theta = ((1.0 + rho) / 2.0).sqrt().acos();
            Ok(phase_pdf(theta, eta, p0)? / (1.0 - rho * rho).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::quad::{integrate, Hints};

    #[test]
    fn lossless_phase_examples() {
        for &th in &[-1.2, -0.3, 0.0, 0.7, 1.5] {
            assert!((phase_pdf_zero_absorption(th, 1.0) - 1.0 / PI).abs() < 1e-15);
        }
        assert!((phase_pdf_zero_absorption(0.0, 2.7) - 1.0 / (PI * 2.7)).abs() < 1e-15);
        let v = integrate(|t| phase_pdf_zero_absorption(t, 3.3), -FRAC_PI_2, FRAC_PI_2, Hints::NONE).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        assert_eq!(phase_pdf_zero_absorption(1.6, 1.0), 0.0);
    }

    #[test]
    fn joint_support() {
        let p0 = P0Model::strong(5.0).unwrap();
        assert_eq!(joint_ttheta_pdf(0.81, PI / 3.0, 1.0, &p0), 0.0);
        assert_eq!(joint_ttheta_asymptotic(0.81, PI / 3.0, 1.0, 5.0), 0.0);
        assert!(joint_ttheta_pdf(0.2, 0.1, 1.0, &p0) > 0.0);
    }

    #[test]
    fn asymptotic_joint_equals_exact_with_strong_p0() {
        let p0 = P0Model::strong(30.0).unwrap();
        for &(t, th) in &[(0.2, 0.1), (0.3, -0.4), (0.05, 1.0)] {
            let a = joint_ttheta_pdf(t, th, 0.7, &p0);
            let b = joint_ttheta_asymptotic(t, th, 0.7, 30.0);
            assert!((a - b).abs() <= 1e-10 * a.max(1e-300), "{a} vs {b}");
        }
    }

    #[test]
    fn rician_examples() {
        let g = gaussian_limit_params(1.0, 50.0);
        let peak = joint_ttheta_rician(g.mean_t * g.mean_t, 0.0, 1.0, 50.0);
        assert!((peak - 1.0 / (4.0 * PI * g.sigma2_t)).abs() < 1e-12 * peak);
        assert!(joint_ttheta_rician(0.9, PI / 2.2, 1.0, 5.0) > 0.0);
    }

    #[test]
    fn gaussian_params() {
        let g = gaussian_limit_params(1.0, 100.0);
        assert!((g.mean_t - 0.5).abs() < 1e-15);
        assert!((g.sigma2_t - 2.5e-3).abs() < 1e-15);
        assert!((g.sigma2_theta - 0.01).abs() < 1e-15);
        let g = gaussian_limit_params(0.37, 7.0);
        assert!((g.sigma2_t * 1.37f64.powi(2) - g.sigma2_theta).abs() < 1e-15);
    }

    #[test]
    fn phase_pdf_is_even() {
        let p0 = P0Model::weak(0.7).unwrap();
        for &th in &[0.1, 0.6, 1.3] {
            assert_eq!(phase_pdf(th, 0.8, &p0).unwrap(), phase_pdf(-th, 0.8, &p0).unwrap());
            assert_eq!(phase_pdf_strong(th, 0.8, 20.0), phase_pdf_strong(-th, 0.8, 20.0));
        }
    }

    #[test]
    fn weak_phase_point_value() {
        let v = phase_pdf_weak(0.0, 1.0, 0.1);
        assert!((v - 0.3173).abs() < 5e-4, "{v}");
        for &th in &[-1.0, 0.0, 0.5, 1.4] {
            let a = phase_pdf_weak(th, 0.6, 1e-12);
            let b = phase_pdf_zero_absorption(th, 0.6);
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn strong_phase_matches_integral_with_strong_p0() {
        let p0 = P0Model::strong(20.0).unwrap();
        for i in -10..=10 {
            let th = 0.1 * i as f64;
            let a = phase_pdf(th, 1.0, &p0).unwrap();
            let b = phase_pdf_strong(th, 1.0, 20.0);
            assert!((a - b).abs() <= 0.05 * a, "theta={th}: {a} vs {b}");
        }
    }

    #[test]
    fn rigidity_zero_absorption() {
        assert!((phase_rigidity_pdf(0.0, 1.0, PhaseModel::ZeroAbsorption).unwrap() - 1.0 / PI).abs() < 1e-15);
        for &rho in &[-0.9, -0.2, 0.4, 0.99] {
            let a = phase_rigidity_pdf(rho, 2.5, PhaseModel::ZeroAbsorption).unwrap();
            let b = phase_rigidity_pdf(-rho, 0.4, PhaseModel::ZeroAbsorption).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
        assert_eq!(phase_rigidity_pdf(1.0, 1.0, PhaseModel::ZeroAbsorption).unwrap(), 0.0);
    }

    #[test]
    fn rigidity_normalizes() {
        let p0 = P0Model::weak(0.5).unwrap();
        let v = integrate(
            |r| phase_rigidity_pdf(r, 1.5, PhaseModel::Exact(&p0)).unwrap(),
            -1.0,
            1.0,
            Hints::RIGHT_INV_SQRT,
        )
        .unwrap();
        let expected = p0.total_mass();
        assert!((v - expected).abs() < 1e-5, "{v} vs {expected}");
    }
}
