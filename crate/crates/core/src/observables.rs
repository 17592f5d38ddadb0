//! Scattering observables at the resonance energy for one background draw.
//!
//! With `D = 1 + i eta K = 1 + eta v + i eta u` the two-channel matrix is
//!
//! ```text
//! S = 1 - (1 - S0) / D,   S0 = [[r0, t0], [t0, -r0]]
//! t = t0 / D,   r± = (eta v ± r0 + i eta u) / D,   d = 2 eta v / |D|^2
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rmt::GreensSample;
use crate::scales::ControlParams;

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn mat2_identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat2_max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Clean-system matrix at the resonance peak, sign convention `t0 >= 0`.
pub fn clean_s_matrix(params: &ControlParams) -> Mat2 {
    let (t0, r0) = (Complex64::from(params.t0), Complex64::from(params.r0));
    [[r0, t0], [t0, -r0]]
}

/// All observables derived from one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringPoint {
    pub u: f64,
    pub v: f64,
    pub t: Complex64,
    pub r_plus: Complex64,
    pub r_minus: Complex64,
    pub transmission: f64,
    pub reflection_plus: f64,
    pub reflection_minus: f64,
    /// Transmission phase in `(-pi/2, pi/2)`.
    pub theta_t: f64,
    pub theta_r_plus: f64,
    pub theta_r_minus: f64,
    /// Unitarity deficit `d`.
    pub deficit: f64,
    /// Phase rigidity `cos 2 theta_t`.
    pub rho: f64,
    pub q_sq: f64,
    /// Set when `t0 = 0`: the transmission phase is undefined and reported as 0.
    pub degenerate: bool,
}

/// Background contribution `S_bg = (1 - i eta K) / (1 + i eta K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackgroundScattering {
    pub s_bg: Complex64,
    pub r_bg: f64,
    pub theta_bg: f64,
}

fn denominator(sample: &GreensSample, eta: f64) -> Complex64 {
    Complex64::new(1.0 + eta * sample.v, eta * sample.u)
}

/// Full 2x2 matrix from the resolvent representation.
pub fn full_s_matrix(sample: &GreensSample, params: &ControlParams) -> Mat2 {
    let inv = denominator(sample, params.eta).inv();
    let s0 = clean_s_matrix(params);
    let id = mat2_identity();
    let mut s = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            s[i][j] = id[i][j] - inv * (id[i][j] - s0[i][j]);
        }
    }
    s
}

pub fn evaluate(sample: &GreensSample, params: &ControlParams) -> ScatteringPoint {
    let eta = params.eta;
    let (u, v) = (sample.u, sample.v);
    let den = denominator(sample, eta);
    let den_sq = den.norm_sqr();
    let inv = den.inv();
    let t = inv * params.t0;
    let r_plus = Complex64::new(eta * v + params.r0, eta * u) * inv;
    let r_minus = Complex64::new(eta * v - params.r0, eta * u) * inv;

    let transmission = params.t0 * params.t0 / den_sq;
    let refl = |r0: f64| ((eta * v + r0).powi(2) + (eta * u).powi(2)) / den_sq;

    let degenerate = params.t0 == 0.0;
    // Re D > 0 keeps the transmission phase inside (-pi/2, pi/2)
    let theta_t = if degenerate {
        0.0
    } else {
        -(eta * u).atan2(1.0 + eta * v)
    };
    let rho = (2.0 * theta_t).cos();

    ScatteringPoint {
        u,
        v,
        t,
        r_plus,
        r_minus,
        transmission,
        reflection_plus: refl(params.r0),
        reflection_minus: refl(-params.r0),
        theta_t,
        theta_r_plus: r_plus.im.atan2(r_plus.re),
        theta_r_minus: r_minus.im.atan2(r_minus.re),
        deficit: 2.0 * eta * v / den_sq,
        rho,
        q_sq: theta_t.tan().powi(2),
        degenerate,
    }
}

/// `1 - S^dagger S`, which equals `(1 - S0) d`.
pub fn unitarity_deficit_matrix(sample: &GreensSample, params: &ControlParams) -> Mat2 {
    let s = full_s_matrix(sample, params);
    let prod = mat2_mul(&mat2_adjoint(&s), &s);
    let id = mat2_identity();
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = id[i][j] - prod[i][j];
        }
    }
    out
}

pub fn background_smatrix(sample: &GreensSample, params: &ControlParams) -> BackgroundScattering {
    let eta = params.eta;
    let num = Complex64::new(1.0 - eta * sample.v, -eta * sample.u);
    let s_bg = num / denominator(sample, eta);
    BackgroundScattering {
        s_bg,
        r_bg: s_bg.norm_sqr(),
        theta_bg: s_bg.arg(),
    }
}

/// Amplitudes `(t, r+, r-)` rebuilt from the background matrix and the
/// channel-mixing angle.
pub fn amplitudes_from_background(bg: &BackgroundScattering, phi: f64) -> (Complex64, Complex64, Complex64) {
    let plus = ONE + bg.s_bg;
    let minus = ONE - bg.s_bg;
    let t = plus * (0.5 * (2.0 * phi).sin());
    let direct = plus * (0.5 * (2.0 * phi).cos());
    (t, 0.5 * minus + direct, 0.5 * minus - direct)
}

/// Ensemble means `(<t>, <r+>, <r->)`, all real.
pub fn mean_amplitudes(params: &ControlParams) -> (f64, f64, f64) {
    let k = 1.0 + params.eta;
    (
        params.t0 / k,
        (params.eta + params.r0) / k,
        (params.eta - params.r0) / k,
    )
}

/// Residuals of the zero-absorption constraints for one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroAbsorptionReport {
    /// `|T - t0^2 cos^2 theta_t|`
    pub intensity_phase: f64,
    /// `max |T - (1 - R±)|`
    pub flux: f64,
    /// Largest reflection-phase residual, compared modulo pi.
    pub reflection_phase: f64,
    pub passed: bool,
}

/// Wraps an angle difference into `[-pi/2, pi/2)`.
fn wrap_mod_pi(a: f64) -> f64 {
    (a + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2
}

/// Checks the deterministic links between intensities and phases that hold
/// when `v = 0`.
///
/// The reflection-phase relation fixes `theta_R` only modulo `pi` (it comes
/// from a tangent), so it is compared on that circle. At `theta_t = 0` the
/// arctangent term is taken as its limit `sign(r0) pi / 2`.
pub fn zero_absorption_check(point: &ScatteringPoint, params: &ControlParams, tol: f64) -> Result<ZeroAbsorptionReport> {
    if point.v != 0.0 {
        return Err(Error::Inapplicable(format!(
            "zero-absorption relations need v = 0, got v = {}",
            point.v
        )));
    }
    let t = point.transmission;
    let intensity_phase = (t - params.t0 * params.t0 * point.theta_t.cos().powi(2)).abs();
    let flux = (t - (1.0 - point.reflection_plus))
        .abs()
        .max((t - (1.0 - point.reflection_minus)).abs());

    let arctan_term = |r0: f64| {
        if point.theta_t == 0.0 {
            if r0 == 0.0 {
                0.0
            } else {
                r0.signum() * FRAC_PI_2
            }
        } else {
            (r0 / point.theta_t.tan()).atan()
        }
    };
    let expected_plus = FRAC_PI_2 + point.theta_t + arctan_term(params.r0);
    let expected_minus = FRAC_PI_2 + point.theta_t - arctan_term(params.r0);
    let mut reflection_phase = 0.0f64;
    // a vanishing amplitude has no phase
    if point.reflection_plus > 1e-20 {
        reflection_phase = reflection_phase.max(wrap_mod_pi(point.theta_r_plus - expected_plus).abs());
    }
    if point.reflection_minus > 1e-20 {
        reflection_phase = reflection_phase.max(wrap_mod_pi(point.theta_r_minus - expected_minus).abs());
    }
    Ok(ZeroAbsorptionReport {
        intensity_phase,
        flux,
        reflection_phase,
        passed: intensity_phase <= tol && flux <= tol && reflection_phase <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sample(u: f64, v: f64) -> GreensSample {
        GreensSample::new(u, v)
    }

    #[test]
    fn decoupled_background_returns_clean_matrix() {
        let p = ControlParams::from_phi(0.7, 1.0, 0.3);
        let s = full_s_matrix(&sample(0.0, 0.0), &p);
        assert!(mat2_max_abs_diff(&s, &clean_s_matrix(&p)) < 1e-15);
        let p0 = ControlParams::from_phi(0.0, 1.0, 0.3);
        let s = full_s_matrix(&sample(1.3, 0.4), &p0);
        assert!(mat2_max_abs_diff(&s, &clean_s_matrix(&p0)) < 1e-15);
    }

    #[test]
    fn maximal_loss_point() {
        let p = ControlParams::perfect(1.0, 1.0);
        let s = full_s_matrix(&sample(0.0, 1.0), &p);
        for row in &s {
            for z in row {
                assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
            }
        }
        let pt = evaluate(&sample(0.0, 1.0), &p);
        assert_abs_diff_eq!(pt.t.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.transmission, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.reflection_plus, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.reflection_minus, 0.25, epsilon = 1e-15);
        assert_eq!(pt.theta_t, 0.0);
        assert_abs_diff_eq!(pt.deficit, 0.5, epsilon = 1e-15);

        let d = unitarity_deficit_matrix(&sample(0.0, 1.0), &p);
        let s0 = clean_s_matrix(&p);
        for i in 0..2 {
            for j in 0..2 {
                let expected = 0.5 * (mat2_identity()[i][j] - s0[i][j]);
                assert!((d[i][j] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn clean_point_values() {
        let p = ControlParams::from_phi(2.0, 1.0, 0.4);
        let pt = evaluate(&sample(0.0, 0.0), &p);
        assert_abs_diff_eq!(pt.t.re, p.t0, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.r_plus.re, p.r0, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.r_minus.re, -p.r0, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.transmission, p.t0 * p.t0, epsilon = 1e-15);
        assert_eq!(pt.theta_t, 0.0);
        assert_eq!(pt.deficit, 0.0);
        assert_eq!(pt.rho, 1.0);
    }

    #[test]
    fn lossless_phase_point() {
        let p = ControlParams::perfect(1.0, 0.0);
        let pt = evaluate(&sample(1.0, 0.0), &p);
        assert_abs_diff_eq!(pt.theta_t, -PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.transmission, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.reflection_plus, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(pt.transmission, pt.theta_t.cos().powi(2), epsilon = 1e-15);
        let rep = zero_absorption_check(&pt, &p, 1e-10).unwrap();
        assert!(rep.passed);
        assert_abs_diff_eq!(pt.theta_r_plus, FRAC_PI_2 + pt.theta_t, epsilon = 1e-15);
    }

    #[test]
    fn zero_absorption_limit_point() {
        let p = ControlParams::from_phi(1.5, 0.0, 0.3);
        let pt = evaluate(&sample(0.0, 0.0), &p);
        let rep = zero_absorption_check(&pt, &p, 1e-10).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_abs_diff_eq!(pt.transmission, p.t0 * p.t0, epsilon = 1e-15);
    }

    #[test]
    fn zero_absorption_check_rejects_lossy_point() {
        let p = ControlParams::perfect(1.0, 1.0);
        let pt = evaluate(&sample(0.2, 0.5), &p);
        assert!(matches!(zero_absorption_check(&pt, &p, 1e-10), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn background_matrix_examples() {
        let p = ControlParams::perfect(1.0, 1.0);
        let bg = background_smatrix(&sample(0.0, 0.0), &p);
        assert_eq!(bg.s_bg, ONE);
        assert_eq!(bg.r_bg, 1.0);
        let bg = background_smatrix(&sample(0.0, 1.0), &p);
        assert!(bg.s_bg.norm() < 1e-15);
    }

    #[test]
    fn mean_amplitude_examples() {
        let (t, rp, rm) = mean_amplitudes(&ControlParams::perfect(1.0, 1.0));
        assert_abs_diff_eq!(t, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rp, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rm, 0.5, epsilon = 1e-15);
        let p = ControlParams::from_phi(0.0, 1.0, 0.2);
        let (t, rp, rm) = mean_amplitudes(&p);
        assert_abs_diff_eq!(t, (0.4f64).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(rp, (0.4f64).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(rm, -(0.4f64).cos(), epsilon = 1e-15);
    }

    #[test]
    fn degenerate_transmission_is_flagged() {
        let p = ControlParams::from_t0(1.0, 1.0, 0.0, 1.0).unwrap();
        let pt = evaluate(&sample(0.4, 0.3), &p);
        assert!(pt.degenerate);
        assert_eq!(pt.transmission, 0.0);
        assert_eq!(pt.theta_t, 0.0);
    }

    fn params_strategy() -> impl Strategy<Value = ControlParams> {
        (0.0f64..10.0, 0.0f64..std::f64::consts::FRAC_PI_2)
            .prop_map(|(eta, phi)| ControlParams::from_phi(eta, 1.0, phi))
    }

    proptest! {
        #[test]
        fn closed_forms_match_matrix_route(
            p in params_strategy(), u in -20.0f64..20.0, v in 0.0f64..20.0,
        ) {
            let s = sample(u, v);
            let pt = evaluate(&s, &p);
            let m = full_s_matrix(&s, &p);
            prop_assert!((m[0][0] - pt.r_plus).norm() < 1e-12);
            prop_assert!((m[0][1] - pt.t).norm() < 1e-12);
            prop_assert!((m[1][0] - pt.t).norm() < 1e-12);
            prop_assert!((m[1][1] - pt.r_minus).norm() < 1e-12);

            // polar consistency
            prop_assert!((Complex64::from_polar(pt.transmission.sqrt(), pt.theta_t) - pt.t).norm() < 1e-12);
            prop_assert!((Complex64::from_polar(pt.reflection_plus.sqrt(), pt.theta_r_plus) - pt.r_plus).norm() < 1e-12);
            prop_assert!((Complex64::from_polar(pt.reflection_minus.sqrt(), pt.theta_r_minus) - pt.r_minus).norm() < 1e-12);

            prop_assert!(pt.deficit >= 0.0 && pt.deficit <= 0.5 + 1e-15);
            let rho_direct = (pt.t.re.powi(2) - pt.t.im.powi(2)) / pt.t.norm_sqr();
            prop_assert!((rho_direct - pt.rho).abs() < 1e-12);
            prop_assert!((pt.q_sq - (1.0 - pt.rho) / (1.0 + pt.rho)).abs() < 1e-9 * (1.0 + pt.q_sq));

            // background parametrisation
            let (t, rp, rm) = amplitudes_from_background(&background_smatrix(&s, &p), p.phi);
            prop_assert!((t - pt.t).norm() < 1e-12);
            prop_assert!((rp - pt.r_plus).norm() < 1e-12);
            prop_assert!((rm - pt.r_minus).norm() < 1e-12);
        }

        #[test]
        fn deficit_matrix_identity(p in params_strategy(), u in -20.0f64..20.0, v in 0.0f64..20.0) {
            let s = sample(u, v);
            let pt = evaluate(&s, &p);
            let d = unitarity_deficit_matrix(&s, &p);
            let s0 = clean_s_matrix(&p);
            for i in 0..2 {
                for j in 0..2 {
                    let expected = (mat2_identity()[i][j] - s0[i][j]) * pt.deficit;
                    prop_assert!((d[i][j] - expected).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn lossy_points_are_subunitary(p in params_strategy(), u in -20.0f64..20.0, v in 1e-3f64..20.0) {
            prop_assume!(p.eta > 1e-3);
            let pt = evaluate(&sample(u, v), &p);
            prop_assert!(pt.transmission < 1.0);
            prop_assert!(pt.reflection_plus < 1.0 && pt.reflection_minus < 1.0);
            prop_assert!(pt.deficit > 0.0);
            let pc = ControlParams::perfect(p.eta, 1.0);
            let q = evaluate(&sample(u, v), &pc);
            prop_assert!((q.reflection_plus - q.reflection_minus).abs() < 1e-14);
            prop_assert!((1.0 - q.reflection_plus - q.transmission - q.deficit).abs() < 1e-12);
        }

        #[test]
        fn zero_absorption_relations(p in params_strategy(), u in -50.0f64..50.0) {
            let pt = evaluate(&sample(u, 0.0), &p);
            let rep = zero_absorption_check(&pt, &p, 1e-10).unwrap();
            prop_assert!(rep.passed, "{:?}", rep);
        }
    }
}
