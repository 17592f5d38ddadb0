use std::f64::consts::{FRAC_PI_2, PI};

use resonance_stats::analytic::quad::{integrate_adaptive, Hints, QuadOptions};
use resonance_stats::analytic::{
    joint_ttheta_asymptotic, joint_ttheta_rician, phase_pdf, phase_pdf_strong, phase_pdf_weak, phase_rigidity_pdf,
    strong_absorption_transmission_pdf, transmission_pdf, Evaluator, FormulaId, PhaseModel,
};
use resonance_stats::harness::{calibrate_p0, TabulatedCdf};
use resonance_stats::observables::evaluate;
use resonance_stats::p0::P0Model;
use resonance_stats::rmt::{sample_stream, EnsembleConfig};
use resonance_stats::scales::ControlParams;
use resonance_stats::special::erfc;

fn strong_p0(x: f64, gamma: f64) -> f64 {
    gamma / 4.0 * (-gamma * (x - 1.0) / 4.0).exp()
}

/// Simpson in `w` with `R = rho_- + w^2`; the square root of
/// `y = (R - rho_-)(rho_+ - R)` cancels against the Jacobian.
fn transmission_oracle(t: f64, eta: f64, gamma: f64) -> f64 {
    let (rm, rp) = ((1.0 - t.sqrt()).powi(2), (1.0 + t.sqrt()).powi(2));
    let wmax = (1.0 - t - rm).sqrt();
    let f = |w: f64| {
        let r = rm + w * w;
        let den = 1.0 - r - t;
        if den <= 0.0 {
            return 0.0;
        }
        let x = (r / eta + eta * t) / den;
        4.0 / (PI * den * den * (rp - r).sqrt()) * strong_p0(x, gamma)
    };
    simpson(f, 0.0, wmax, 4000)
}

/// Simpson in `s = ln p` over a range wide enough for any `P0` with an
/// exponential tail.
fn phase_oracle(theta: f64, eta: f64, gamma: f64) -> f64 {
    let sec2 = 1.0 / theta.cos().powi(2);
    let f = |s: f64| {
        let p = s.exp();
        let x = ((1.0 + p).powi(2) * sec2 - 2.0 * p + eta * eta - 1.0) / (2.0 * eta * p);
        (1.0 + p) / p * strong_p0(x, gamma)
    };
    sec2 / (2.0 * PI) * simpson(f, -40.0, 40.0, 20_000)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

#[test]
fn transmission_matches_oracle_and_frozen_values() {
    let frozen = [
        (0.5, 5.0, 0.1, 4.088282612995454e-1),
        (0.5, 5.0, 0.3, 1.261617187337843e0),
        (0.5, 5.0, 0.6, 1.727649374848604e0),
        (0.5, 5.0, 0.9, 8.582211400499094e-2),
        (2.0, 20.0, 0.1, 6.607785751751725e0),
        (2.0, 20.0, 0.3, 4.512557905833363e-1),
        (2.0, 20.0, 0.6, 1.251323653887140e-5),
    ];
    for (eta, gamma, t, value) in frozen {
        let lib = transmission_pdf(t, eta, &P0Model::strong(gamma).unwrap()).unwrap();
        let oracle = transmission_oracle(t, eta, gamma);
        assert!(close(lib, oracle, 1e-9, 1e-15), "eta={eta} t={t}: {lib} vs oracle {oracle}");
        assert!(close(lib, value, 1e-9, 1e-15), "eta={eta} t={t}: {lib} vs frozen {value}");
    }
}

#[test]
fn phase_matches_oracle_and_frozen_values() {
    let frozen = [
        (1.0, 5.0, 0.0, 9.717554379676921e-1),
        (1.0, 5.0, 0.3, 7.955112957554601e-1),
        (1.0, 5.0, 0.8, 9.455253460573793e-2),
        (1.0, 5.0, 1.2, 1.635410935223813e-7),
        (0.4, 20.0, 0.0, 3.260276613111432e0),
        (0.4, 20.0, 0.3, 1.615313235481612e-1),
    ];
    for (eta, gamma, th, value) in frozen {
        let lib = phase_pdf(th, eta, &P0Model::strong(gamma).unwrap()).unwrap();
        let oracle = phase_oracle(th, eta, gamma);
        assert!(close(lib, oracle, 1e-9, 1e-15), "eta={eta} th={th}: {lib} vs oracle {oracle}");
        assert!(close(lib, value, 1e-9, 1e-15), "eta={eta} th={th}: {lib} vs frozen {value}");
    }
}

#[test]
fn strong_p0_transmission_is_nearly_normalized() {
    let p0 = P0Model::strong(20.0).unwrap();
    let ev = Evaluator::new(FormulaId::Transmission, ControlParams::perfect(1.0, 20.0), Some(p0)).unwrap();
    let norm = ev.normalization().unwrap();
    assert!((norm - 1.0).abs() < 0.02, "{norm}");
}

#[test]
fn strong_transmission_peaks_at_mean_amplitude_squared() {
    let (eta, gamma) = (1.0, 50.0);
    let best = (1..10_000)
        .map(|i| i as f64 / 10_000.0)
        .max_by(|a, b| {
            strong_absorption_transmission_pdf(*a, eta, gamma).total_cmp(&strong_absorption_transmission_pdf(*b, eta, gamma))
        })
        .unwrap();
    assert!((best - 0.25).abs() < 0.01, "argmax {best}");
    assert!(strong_absorption_transmission_pdf(0.999_999, eta, gamma) < 1e-12);
}

#[test]
fn asymptotic_joint_peaks_at_mean_and_respects_support() {
    let (eta, gamma) = (1.0, 50.0);
    let mut best = (0.0, 0.0, 0.0);
    for i in 1..400 {
        for j in -200..=200 {
            let (t, th) = (i as f64 / 400.0, j as f64 / 400.0);
            let d = joint_ttheta_asymptotic(t, th, eta, gamma);
            if d > best.2 {
                best = (t, th, d);
            }
        }
    }
    assert!((best.0 - 0.25).abs() < 0.02 && best.1.abs() < 0.02, "{best:?}");
    let outside = (0.9, PI / 2.2);
    assert_eq!(joint_ttheta_asymptotic(outside.0, outside.1, eta, gamma), 0.0);
    assert!(joint_ttheta_rician(outside.0, outside.1, eta, gamma) > 0.0);
}

fn normal_cdf(x: f64, sigma: f64) -> f64 {
    0.5 * erfc(-x / (sigma * std::f64::consts::SQRT_2))
}

#[test]
fn strong_phase_tends_to_gaussian() {
    let (eta, gamma): (f64, f64) = (1.0, 200.0);
    let sigma = (4.0 * eta * eta / (gamma * (1.0 + eta).powi(2))).sqrt();
    let cdf = TabulatedCdf::build(|x| Ok(phase_pdf_strong(x, eta, gamma)), -FRAC_PI_2, FRAC_PI_2, 1024).unwrap();
    let ks = (-2000..=2000)
        .map(|i| {
            let x = i as f64 / 2000.0 * 6.0 * sigma;
            (cdf.eval(x) - normal_cdf(x, sigma)).abs()
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.02, "{ks}");
}

#[test]
fn strong_phase_close_to_exact_law_with_strong_p0() {
    let (eta, gamma) = (1.0, 20.0);
    let p0 = P0Model::strong(gamma).unwrap();
    for i in -20..=20 {
        let th = i as f64 / 20.0;
        let exact = phase_pdf(th, eta, &p0).unwrap();
        let approx = phase_pdf_strong(th, eta, gamma);
        if exact > 1e-3 {
            assert!((approx / exact - 1.0).abs() < 0.05, "th={th}: {approx} vs {exact}");
        }
    }
}

#[test]
fn weak_phase_value_and_tail() {
    let v = phase_pdf_weak(0.0, 1.0, 0.1);
    assert!((v - 0.3173).abs() < 5e-4, "{v}");
    let (eta, gamma) = (1.0, 0.1);
    let log_p = |sec2: f64| phase_pdf_weak((1.0 / sec2).sqrt().acos(), eta, gamma).ln();
    let slope = (log_p(4000.0) - log_p(2000.0)) / 2000.0;
    assert!((slope / (-gamma / (4.0 * eta)) - 1.0).abs() < 0.05, "{slope}");
}

#[test]
fn exact_phase_normalizes_with_empirical_p0() {
    let p0 = calibrate_p0(&EnsembleConfig::new(400, 1.0, 91, 0), 200_000).unwrap();
    let norm = integrate_adaptive(
        |th| phase_pdf(th, 2.0, &p0).unwrap(),
        -FRAC_PI_2,
        FRAC_PI_2,
        Hints::NONE,
        &QuadOptions::with_tol(1e-9, 1e-9),
    )
    .unwrap()
    .value;
    assert!((norm - 1.0).abs() < 1e-3, "{norm}");
}

/// The exact law and the Monte Carlo agree that the rigidity density dies
/// like `exp(-gamma / (eta (1 + rho)))` near `rho = -1`.
#[test]
fn rigidity_cutoff_follows_exact_law() {
    let (eta, gamma) = (1.0, 1.0);
    let p0 = calibrate_p0(&EnsembleConfig::new(400, gamma, 92, 0), 400_000).unwrap();
    let params = ControlParams::perfect(eta, gamma);
    let rho: Vec<f64> = sample_stream(&EnsembleConfig::new(400, gamma, 93, 400_000))
        .unwrap()
        .iter()
        .map(|s| evaluate(s, &params).rho)
        .collect();
    let opts = QuadOptions::with_tol(1e-14, 1e-9);
    for c in [0.3, 0.5] {
        let mc = rho.iter().filter(|r| 1.0 + **r < c).count() as f64 / rho.len() as f64;
        let exact = integrate_adaptive(
            |r| phase_rigidity_pdf(r, eta, PhaseModel::Exact(&p0)).unwrap(),
            -1.0,
            -1.0 + c,
            Hints::NONE,
            &opts,
        )
        .unwrap()
        .value;
        assert!((mc / exact - 1.0).abs() < 0.1, "c={c}: mc {mc} exact {exact}");
    }

    let pts: Vec<(f64, f64)> = (0..20)
        .map(|k| {
            let e = 0.05 + 0.15 * k as f64 / 19.0;
            let d = phase_rigidity_pdf(-1.0 + e, eta, PhaseModel::Exact(&p0)).unwrap();
            (1.0 / e, d.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let full = -gamma / eta;
    let half = -gamma / (2.0 * eta);
    assert!((slope - full).abs() < (slope - half).abs(), "slope {slope}");
}
