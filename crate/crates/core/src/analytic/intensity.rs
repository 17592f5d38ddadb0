//! Distributions of the reflection and transmission intensities.

use std::f64::consts::PI;

use super::quad::{integrate_piecewise, QuadOptions};
use crate::error::{Error, Result};
use crate::p0::P0Model;

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta = {eta} must be > 0")))
    }
}

pub(crate) fn quad_opts() -> QuadOptions {
    QuadOptions::with_tol(1e-10, 1e-10)
}

/// `x` at perfect coupling as a function of `(R, T)`.
pub fn x_rt(r: f64, t: f64, eta: f64) -> f64 {
    (r / eta + eta * t) / (1.0 - r - t)
}

/// Joint density of `(R, T)` at perfect coupling.
///
/// Zero unless `1 - R - T > 0` and `y = 1 + 2RT - (1-R)^2 - (1-T)^2 > 0`.
pub fn joint_rt_pdf(r: f64, t: f64, eta: f64, p0: &P0Model) -> Result<f64> {
    check_eta(eta)?;
    // both written symmetric in (R, T) so that swapping them is exact
    let w = 1.0 - (r + t);
    let y = 2.0 * (r + t) - 1.0 - (r - t).powi(2);
    if !(r >= 0.0 && t >= 0.0 && w > 0.0 && y > 0.0) {
        return Ok(0.0);
    }
    Ok(2.0 / (PI * w * w * y.sqrt()) * p0.density(x_rt(r, t, eta)))
}

/// Transmission density at perfect coupling.
///
/// The reflection integral over `(rho_-, 1 - T)`, `rho_± = (1 ± sqrt T)^2`,
/// is taken in the angle `psi` with `R = 1 + T - 2 sqrt(T) cos(psi)`, which
/// absorbs the inverse square root at `rho_-` exactly:
///
/// ```text
/// P(T) = (2/pi) int_0^psi_max dpsi P0(x) / (2 sqrt(T) (cos psi - sqrt T))^2
/// ```
///
/// The range is truncated where `P0` drops below its cutoff.
pub fn transmission_pdf(t: f64, eta: f64, p0: &P0Model) -> Result<f64> {
    check_eta(eta)?;
    if !(t > 0.0 && t < 1.0) {
        return Ok(0.0);
    }
    let st = t.sqrt();
    let x_max = p0.upper_cutoff();
    // R where the P0 argument reaches x_max
    let r_trunc = (x_max * (1.0 - t) - eta * t) / (x_max + 1.0 / eta);
    let rho_minus = (1.0 - st).powi(2);
    if r_trunc <= rho_minus {
        return Ok(0.0);
    }
    let cos_hi = ((1.0 + t - r_trunc) / (2.0 * st)).clamp(-1.0, 1.0);
    let psi_hi = cos_hi.acos();
    let f = |psi: f64| {
        let c = psi.cos();
        let w = 2.0 * st * (c - st);
        if w <= 0.0 {
            return 0.0;
        }
        let r = 1.0 + t - 2.0 * st * c;
        p0.density(x_rt(r, t, eta)) / (w * w)
    };
    // x grows with psi; map the P0 kinks back to angles
    let breaks: Vec<f64> = p0
        .kinks()
        .iter()
        .map(|&x| {
            let r = (x * (1.0 - t) - eta * t) / (x + 1.0 / eta);
            ((1.0 + t - r) / (2.0 * st)).clamp(-1.0, 1.0).acos()
        })
        .collect();
    let res = integrate_piecewise(f, 0.0, psi_hi, &breaks, &quad_opts())?;
    Ok(2.0 / PI * res.value)
}

/// Transmission density for direct transmission `t0 <= 1`: the perfect
/// coupling law rescaled to `T / t0^2`.
pub fn transmission_pdf_coupled(t: f64, eta: f64, t0: f64, p0: &P0Model) -> Result<f64> {
    if !(t0 > 0.0 && t0 <= 1.0) {
        return Err(Error::Domain(format!("t0 = {t0} must lie in (0, 1]")));
    }
    let scale = t0 * t0;
    Ok(transmission_pdf(t / scale, eta, p0)? / scale)
}

/// Lossless transmission density.
pub fn transmission_pdf_zero_absorption(t: f64, eta: f64) -> f64 {
    if !(t > 0.0 && t < 1.0) {
        return 0.0;
    }
    1.0 / (PI * (t * (1.0 - t)).sqrt()) / (eta * t + (1.0 - t) / eta)
}

/// Strong-absorption approximation to the transmission density, peaked near
/// `T = 1 / (1 + eta)^2`.
pub fn strong_absorption_transmission_pdf(t: f64, eta: f64, gamma: f64) -> f64 {
    if !(t > 0.0 && t < 1.0) {
        return 0.0;
    }
    let st = t.sqrt();
    let exponent = -gamma / (8.0 * eta) * (1.0 - (eta + 1.0) * st).powi(2) / (st * (1.0 - st));
    let denom = 4.0 * PI.sqrt() * (1.0 - st) * t.powf(0.75) * (1.0 + (eta * eta - 1.0) * t).sqrt();
    (gamma * eta).sqrt() * exponent.exp() / denom
}

/// `x` for the reflection law at direct reflection `r0`.
pub fn x_reflection(r: f64, t: f64, eta: f64, r0: f64) -> f64 {
    ((1.0 + r0) * (r - r0) + t * (eta * eta + r0)) / (eta * (1.0 + r0) * (1.0 - r - t))
}

/// Density of `R = R_+` at direct reflection `r0` (use `-r0` for `R_-`).
///
/// Integrates over `T in (T_-, T_*)`, `T_± = (1+r0)/(1-r0) (1 ± sqrt R)^2`,
/// `T_* = min(1 - R, T_+)`; the support is empty when `T_- >= T_*`, which
/// for `r0 > 0` means `sqrt R <= r0`.
pub fn reflection_pdf(r: f64, eta: f64, r0: f64, p0: &P0Model) -> Result<f64> {
    check_eta(eta)?;
    if !(r0.abs() < 1.0) {
        return Err(Error::Domain(format!("|r0| = {} must be < 1", r0.abs())));
    }
    if !(r > 0.0 && r < 1.0) {
        return Ok(0.0);
    }
    let sr = r.sqrt();
    let k = (1.0 + r0) / (1.0 - r0);
    let t_minus = k * (1.0 - sr).powi(2);
    let t_plus = k * (1.0 + sr).powi(2);
    let t_star = (1.0 - r).min(t_plus);
    if t_minus >= t_star {
        return Ok(0.0);
    }
    // T where x reaches the P0 cutoff
    let x_max = p0.upper_cutoff();
    let t_trunc = (x_max * eta * (1.0 + r0) * (1.0 - r) - (1.0 + r0) * (r - r0))
        / (x_max * eta * (1.0 + r0) + eta * eta + r0);
    let t_hi = t_star.min(t_trunc);
    if t_hi <= t_minus {
        return Ok(0.0);
    }
    // T = mid - half cos(psi) absorbs both inverse square roots
    let mid = k * (1.0 + r);
    let half = 2.0 * k * sr;
    let psi_hi = ((mid - t_hi) / half).clamp(-1.0, 1.0).acos();
    let f = |psi: f64| {
        let tt = mid - half * psi.cos();
        let w = 1.0 - r - tt;
        if w <= 0.0 {
            return 0.0;
        }
        p0.density(x_reflection(r, tt, eta, r0)) / (w * w)
    };
    // x is a Mobius map of T with its pole at T = 1 - R, so each kink has one preimage
    let breaks: Vec<f64> = p0
        .kinks()
        .iter()
        .map(|&x| {
            let a = x * eta * (1.0 + r0);
            let tt = (a * (1.0 - r) - (1.0 + r0) * (r - r0)) / (a + eta * eta + r0);
            ((mid - tt) / half).clamp(-1.0, 1.0).acos()
        })
        .collect();
    let res = integrate_piecewise(f, 0.0, psi_hi, &breaks, &quad_opts())?;
    Ok(2.0 / PI * res.value)
}
