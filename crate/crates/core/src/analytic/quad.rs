//! Globally adaptive Gauss-Kronrod (10/21) quadrature with endpoint
//! substitutions for integrable inverse-square-root singularities and a
//! rational map for semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_570_318_774_008,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Behaviour of the integrand at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointHint {
    #[default]
    Regular,
    /// `f ~ |x - endpoint|^(-1/2)`; handled by `x = endpoint ± w^2`.
    InvSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Hints {
    pub left: EndpointHint,
    pub right: EndpointHint,
}

impl Hints {
    pub const NONE: Hints = Hints {
        left: EndpointHint::Regular,
        right: EndpointHint::Regular,
    };
    pub const LEFT_INV_SQRT: Hints = Hints {
        left: EndpointHint::InvSqrt,
        right: EndpointHint::Regular,
    };
    pub const RIGHT_INV_SQRT: Hints = Hints {
        left: EndpointHint::Regular,
        right: EndpointHint::InvSqrt,
    };
    pub const BOTH_INV_SQRT: Hints = Hints {
        left: EndpointHint::InvSqrt,
        right: EndpointHint::InvSqrt,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 0.0,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn gk21(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

fn adaptive_finite(f: &dyn Fn(f64) -> f64, a: f64, b: f64, opts: &QuadOptions) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }
    let (v, e) = gk21(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut subdivisions = 1;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::NoConvergence {
                value: total,
                abs_error: total_err,
            });
        }
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::NoConvergence {
                value: total,
                abs_error: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval exhausted at machine precision; accept it as is
            heap.push(Segment { error: 0.0, ..worst });
            total_err -= worst.error;
            continue;
        }
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        subdivisions += 1;
    }
    // re-sum to shed accumulated update round-off
    let value = heap.iter().map(|s| s.value).sum();
    let abs_error = heap.iter().map(|s| s.error).sum();
    Ok(Integral {
        value,
        abs_error,
        subdivisions,
    })
}

fn combine(a: Integral, b: Integral) -> Integral {
    Integral {
        value: a.value + b.value,
        abs_error: a.abs_error + b.abs_error,
        subdivisions: a.subdivisions + b.subdivisions,
    }
}

fn halve(opts: &QuadOptions) -> QuadOptions {
    QuadOptions {
        abs_tol: 0.5 * opts.abs_tol,
        ..*opts
    }
}

fn finite_with_hints(f: &dyn Fn(f64) -> f64, a: f64, b: f64, hints: Hints, opts: &QuadOptions) -> Result<Integral> {
    match (hints.left, hints.right) {
        (EndpointHint::Regular, EndpointHint::Regular) => adaptive_finite(f, a, b, opts),
        (EndpointHint::InvSqrt, EndpointHint::Regular) => {
            let g = |w: f64| {
                let x = a + w * w;
                // rounds onto the singular endpoint
                if x == a { 0.0 } else { 2.0 * w * f(x) }
            };
            adaptive_finite(&g, 0.0, (b - a).sqrt(), opts)
        }
        (EndpointHint::Regular, EndpointHint::InvSqrt) => {
            let g = |w: f64| {
                let x = b - w * w;
                if x == b { 0.0 } else { 2.0 * w * f(x) }
            };
            adaptive_finite(&g, 0.0, (b - a).sqrt(), opts)
        }
        (EndpointHint::InvSqrt, EndpointHint::InvSqrt) => {
            let m = 0.5 * (a + b);
            let half = halve(opts);
            let left = finite_with_hints(f, a, m, Hints::LEFT_INV_SQRT, &half)?;
            let right = finite_with_hints(f, m, b, Hints::RIGHT_INV_SQRT, &half)?;
            Ok(combine(left, right))
        }
    }
}

/// Integrates `f` over `[a, b]`, either end possibly infinite.
///
/// Converges when the estimated absolute error drops below
/// `max(abs_tol, rel_tol * |value|)`; otherwise fails with
/// [`Error::NoConvergence`] carrying the partial result.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, hints: Hints, opts: &QuadOptions) -> Result<Integral> {
    integrate_dyn(&f, a, b, hints, opts)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, hints: Hints, opts: &QuadOptions) -> Result<Integral> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("NaN integration limit".into()));
    }
    if a > b {
        let r = integrate_dyn(f, b, a, Hints { left: hints.right, right: hints.left }, opts)?;
        return Ok(Integral { value: -r.value, ..r });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => finite_with_hints(&f, a, b, hints, opts),
        (true, false) => {
            // x = a + t / (1 - t)
            let g = |t: f64| {
                if t >= 1.0 {
                    return 0.0;
                }
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            };
            finite_with_hints(&g, 0.0, 1.0, Hints { left: hints.left, right: EndpointHint::Regular }, opts)
        }
        (false, true) => {
            let g = |t: f64| {
                if t >= 1.0 {
                    return 0.0;
                }
                let s = 1.0 - t;
                f(b - t / s) / (s * s)
            };
            finite_with_hints(&g, 0.0, 1.0, Hints { left: hints.right, right: EndpointHint::Regular }, opts)
        }
        (false, false) => {
            let half = halve(opts);
            let left = integrate_dyn(f, f64::NEG_INFINITY, 0.0, Hints::NONE, &half)?;
            let right = integrate_dyn(f, 0.0, f64::INFINITY, Hints::NONE, &half)?;
            Ok(combine(left, right))
        }
    }
}

/// Integrates over `[a, b]` split at the interior `breaks` (any order;
/// points outside `(a, b)` are ignored). Each piece gets an equal share of
/// the absolute tolerance.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], opts: &QuadOptions) -> Result<Integral> {
    let (lo, hi) = (a.min(b), a.max(b));
    let mut points: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    points.push(lo);
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let share = QuadOptions {
        abs_tol: opts.abs_tol / (points.len() - 1) as f64,
        ..*opts
    };
    let mut total = Integral {
        value: 0.0,
        abs_error: 0.0,
        subdivisions: 0,
    };
    for w in points.windows(2) {
        total = combine(total, integrate_dyn(&f, w[0], w[1], Hints::NONE, &share)?);
    }
    if a > b {
        total.value = -total.value;
    }
    Ok(total)
}

/// [`integrate_adaptive`] with default options, returning only the value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, hints: Hints) -> Result<f64> {
    integrate_adaptive(f, a, b, hints, &QuadOptions::default()).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn piecewise_matches_plain() {
        let f = |x: f64| (x - 0.3).abs() + (x - 0.71).abs();
        let opts = QuadOptions::with_tol(1e-12, 0.0);
        let r = integrate_piecewise(f, 0.0, 1.0, &[0.71, 0.3, 5.0, -1.0], &opts).unwrap();
        let exact = (0.09 + 0.49) / 2.0 + (0.71f64.powi(2) + 0.29f64.powi(2)) / 2.0;
        assert!((r.value - exact).abs() < 1e-13);
        assert!(r.subdivisions <= 3, "{r:?}");
        let back = integrate_piecewise(f, 1.0, 0.0, &[0.3], &opts).unwrap();
        assert!((back.value + exact).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_with_hint() {
        let r = integrate_adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, Hints::LEFT_INV_SQRT, &QuadOptions::with_tol(1e-12, 0.0)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn exponential_half_line() {
        let r = integrate_adaptive(|x: f64| (-x).exp(), 0.0, f64::INFINITY, Hints::NONE, &QuadOptions::with_tol(1e-12, 0.0)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn arcsine_law_both_ends() {
        let f = |x: f64| 1.0 / (PI * (x * (1.0 - x)).sqrt());
        let v = integrate(f, 0.0, 1.0, Hints::BOTH_INV_SQRT).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_whole_line() {
        let v = integrate(|x: f64| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, Hints::NONE).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = integrate(|x: f64| x * x, 1.0, 0.0, Hints::NONE).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn nonconvergence_reports_partial_value() {
        let opts = QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_subdivisions: 5,
        };
        match integrate_adaptive(|x: f64| (1.0 / x).sin() / x.sqrt(), 1e-6, 1.0, Hints::NONE, &opts) {
            Err(Error::NoConvergence { value, abs_error }) => {
                assert!(value.is_finite());
                assert!(abs_error > 1e-14);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }
}
