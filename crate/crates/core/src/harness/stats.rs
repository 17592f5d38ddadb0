//! Histograms, distribution distances and moment estimators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::quad::{integrate_adaptive, Hints, QuadOptions};
use crate::error::{Error, Result};

/// Bin-edge layout of a [`Histogram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binning {
    Uniform,
    /// Geometric edges; requires `lo > 0`.
    Log,
}

/// One-dimensional normalized histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    /// Samples inside the support.
    pub total: u64,
    /// `counts / (total * width)`; integrates to 1 over the support.
    pub densities: Vec<f64>,
}

fn edges(lo: f64, hi: f64, n_bins: usize, binning: Binning) -> Result<Vec<f64>> {
    if n_bins < 2 {
        return Err(Error::Validation(format!("need at least 2 bins, got {n_bins}")));
    }
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Validation(format!("bad histogram support ({lo}, {hi})")));
    }
    Ok(match binning {
        Binning::Uniform => (0..=n_bins)
            .map(|i| if i == n_bins { hi } else { lo + (hi - lo) * i as f64 / n_bins as f64 })
            .collect(),
        Binning::Log => {
            if !(lo > 0.0) {
                return Err(Error::Validation("log binning needs a positive lower edge".into()));
            }
            let r = (hi / lo).ln();
            (0..=n_bins)
                .map(|i| if i == n_bins { hi } else { lo * (r * i as f64 / n_bins as f64).exp() })
                .collect()
        }
    })
}

fn locate(edges: &[f64], x: f64) -> Option<usize> {
    let n = edges.len() - 1;
    if !(x >= edges[0] && x <= edges[n]) {
        return None;
    }
    // the closed right edge belongs to the last bin
    let i = edges.partition_point(|&e| e <= x);
    Some(i.saturating_sub(1).min(n - 1))
}

impl Histogram {
    pub fn new(samples: &[f64], lo: f64, hi: f64, n_bins: usize) -> Result<Self> {
        Self::with_binning(samples, lo, hi, n_bins, Binning::Uniform)
    }

    pub fn with_binning(samples: &[f64], lo: f64, hi: f64, n_bins: usize, binning: Binning) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("histogram of zero samples".into()));
        }
        let edges = edges(lo, hi, n_bins, binning)?;
        let mut counts = vec![0u64; n_bins];
        let (mut underflow, mut overflow) = (0, 0);
        for &x in samples {
            match locate(&edges, x) {
                Some(i) => counts[i] += 1,
                None if x < lo => underflow += 1,
                None => overflow += 1,
            }
        }
        let total: u64 = counts.iter().sum();
        let densities = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, w)| if total == 0 { 0.0 } else { c as f64 / (total as f64 * (w[1] - w[0])) })
            .collect();
        Ok(Self {
            edges,
            counts,
            underflow,
            overflow,
            total,
            densities,
        })
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Total number of samples seen, including out-of-support ones.
    pub fn n_seen(&self) -> u64 {
        self.total + self.underflow + self.overflow
    }
}

/// Two-dimensional histogram on a uniform rectangular grid.
///
/// Densities are normalized by every sample seen, so the in-box integral
/// equals the in-box fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2d {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    /// Row-major, `x` slowest.
    pub counts: Vec<u64>,
    pub outside: u64,
    pub n_seen: u64,
    pub densities: Vec<f64>,
}

impl Histogram2d {
    pub fn new(samples: &[(f64, f64)], x_range: (f64, f64), y_range: (f64, f64), bins: (usize, usize)) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("histogram of zero samples".into()));
        }
        let x_edges = edges(x_range.0, x_range.1, bins.0, Binning::Uniform)?;
        let y_edges = edges(y_range.0, y_range.1, bins.1, Binning::Uniform)?;
        let mut counts = vec![0u64; bins.0 * bins.1];
        let mut outside = 0;
        for &(x, y) in samples {
            match (locate(&x_edges, x), locate(&y_edges, y)) {
                (Some(i), Some(j)) => counts[i * bins.1 + j] += 1,
                _ => outside += 1,
            }
        }
        let n = samples.len() as f64;
        let area = (x_edges[1] - x_edges[0]) * (y_edges[1] - y_edges[0]);
        let densities = counts.iter().map(|&c| c as f64 / (n * area)).collect();
        Ok(Self {
            x_edges,
            y_edges,
            counts,
            outside,
            n_seen: samples.len() as u64,
            densities,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x_edges.len() - 1, self.y_edges.len() - 1)
    }
}

/// Kolmogorov-Smirnov distance between `samples` and a CDF.
///
/// Fails with [`Error::NonMonotoneCdf`] if the CDF decreases (beyond
/// round-off) between consecutive sorted samples.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("KS distance of zero samples".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if f < prev - 1e-12 {
            return Err(Error::NonMonotoneCdf { at: x });
        }
        prev = prev.max(f);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("two-sample KS with an empty sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov critical coefficient `c(alpha) = sqrt(-ln(alpha/2)/2)`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// One-sample critical value at level `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    ks_coefficient(alpha) / (n as f64).sqrt()
}

/// Two-sample critical value at level `alpha`.
pub fn ks_critical_two_sample(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}

/// CDF tabulated by cumulative adaptive quadrature of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    nodes: Vec<f64>,
    /// Normalized cumulative values at `nodes`.
    cdf: Vec<f64>,
    /// Normalized density at `nodes`; non-finite where singular.
    slopes: Vec<f64>,
    /// Integral of the density over the support before normalization.
    pub mass: f64,
}

/// Cell layout: `cells` uniform cells with the first and last split
/// geometrically towards the endpoints.
fn cdf_nodes(lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    const REFINE: usize = 24;
    let h = (hi - lo) / cells as f64;
    let mut nodes = vec![lo];
    for k in (1..=REFINE).rev() {
        nodes.push(lo + h * 0.5f64.powi(k as i32));
    }
    for i in 1..cells {
        nodes.push(lo + h * i as f64);
    }
    for k in 1..=REFINE {
        nodes.push(hi - h * 0.5f64.powi(k as i32));
    }
    nodes.push(hi);
    nodes
}

impl TabulatedCdf {
    /// Builds the CDF over `[lo, hi]` with `cells` base cells; the first and
    /// last cells treat their outer endpoint as an inverse square-root
    /// singularity.
    pub fn build<F>(density: F, lo: f64, hi: f64, cells: usize) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        if !(hi > lo) || cells < 2 {
            return Err(Error::Validation(format!("bad CDF support ({lo}, {hi}) with {cells} cells")));
        }
        let nodes = cdf_nodes(lo, hi, cells);
        let last = nodes.len() - 2;
        let opts = QuadOptions::with_tol(1e-10, 1e-10);
        let masses = (0..nodes.len() - 1)
            .into_par_iter()
            .map(|i| {
                let hints = match i {
                    0 => Hints::LEFT_INV_SQRT,
                    i if i == last => Hints::RIGHT_INV_SQRT,
                    _ => Hints::NONE,
                };
                let err = std::cell::Cell::new(None);
                let f = |x: f64| match density(x) {
                    Ok(v) => v,
                    Err(e) => {
                        err.set(Some(e));
                        0.0
                    }
                };
                let r = integrate_adaptive(f, nodes[i], nodes[i + 1], hints, &opts);
                if let Some(e) = err.take() {
                    return Err(e);
                }
                Ok(r?.value)
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut cdf = Vec::with_capacity(nodes.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for (i, &m) in masses.iter().enumerate() {
            if m < -1e-12 {
                return Err(Error::NonMonotoneCdf { at: nodes[i] });
            }
            acc += m.max(0.0);
            cdf.push(acc);
        }
        if !(acc > 0.0) || !acc.is_finite() {
            return Err(Error::Validation(format!("density integrates to {acc} on ({lo}, {hi})")));
        }
        for c in cdf.iter_mut() {
            *c /= acc;
        }
        let slopes = nodes
            .par_iter()
            .map(|&x| density(x).map(|d| d / acc).unwrap_or(f64::NAN))
            .collect();
        Ok(Self {
            nodes,
            cdf,
            slopes,
            mass: acc,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().expect("nonempty"))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let i = self.nodes.partition_point(|&n| n <= x) - 1;
        let h = self.nodes[i + 1] - self.nodes[i];
        let w = (x - self.nodes[i]) / h;
        let (f0, f1) = (self.cdf[i], self.cdf[i + 1]);
        let (d0, d1) = (self.slopes[i], self.slopes[i + 1]);
        // end cells may hold an integrable singularity
        if i == 0 || i + 2 == self.nodes.len() || !(d0.is_finite() && d1.is_finite()) {
            return f0 + w * (f1 - f0);
        }
        // cubic Hermite with the exact derivative F' = density
        let w2 = w * w;
        let w3 = w2 * w;
        let v = (2.0 * w3 - 3.0 * w2 + 1.0) * f0
            + (w3 - 2.0 * w2 + w) * h * d0
            + (-2.0 * w3 + 3.0 * w2) * f1
            + (w3 - w2) * h * d1;
        v.clamp(f0, f1)
    }

    pub fn ks(&self, samples: &[f64]) -> Result<f64> {
        ks_distance(samples, |x| self.eval(x))
    }

    /// Probability mass in `[a, b]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        self.eval(b) - self.eval(a)
    }

    /// Mean and variance of the normalized law, from `E[g(X)] = g(lo) + int g'(x)(1 - F(x)) dx`.
    pub fn moments(&self) -> (f64, f64) {
        let (lo, _) = self.support();
        let (mut m1, mut m2) = (lo, lo * lo);
        for i in 0..self.nodes.len() - 1 {
            let (a, b) = (self.nodes[i], self.nodes[i + 1]);
            let (sa, sb) = (1.0 - self.cdf[i], 1.0 - self.cdf[i + 1]);
            m1 += 0.5 * (sa + sb) * (b - a);
            m2 += (a * sa + b * sb) * (b - a);
        }
        (m1, (m2 - m1 * m1).max(0.0))
    }
}

/// L1 distance between a histogram and the normalized law of `cdf`, using
/// exact cell masses; out-of-support samples count in full.
pub fn l1_histogram(hist: &Histogram, cdf: &TabulatedCdf) -> f64 {
    let n = hist.n_seen() as f64;
    let inside: f64 = hist
        .counts
        .iter()
        .zip(hist.edges.windows(2))
        .map(|(&c, w)| (c as f64 / n - cdf.mass_between(w[0], w[1])).abs())
        .sum();
    let analytic_outside = 1.0 - cdf.mass_between(hist.edges[0], *hist.edges.last().expect("edges"));
    inside + analytic_outside + (hist.underflow + hist.overflow) as f64 / n
}

// 6-point Gauss-Legendre on [-1, 1]
const GL6_X: [f64; 6] = [
    -0.932_469_514_203_152,
    -0.661_209_386_466_264_5,
    -0.238_619_186_083_196_9,
    0.238_619_186_083_196_9,
    0.661_209_386_466_264_5,
    0.932_469_514_203_152,
];
const GL6_W: [f64; 6] = [
    0.171_324_492_379_170_3,
    0.360_761_573_048_138_6,
    0.467_913_934_572_691_1,
    0.467_913_934_572_691_1,
    0.360_761_573_048_138_6,
    0.171_324_492_379_170_3,
];

/// Cell masses of a 2D density on the histogram grid, each cell integrated
/// by a tensor 6x6 Gauss-Legendre rule on a 2x2 split of the cell.
pub fn cell_masses_2d<F>(hist: &Histogram2d, density: F) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let (nx, ny) = hist.shape();
    (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / ny, k % ny);
            let (x0, x1) = (hist.x_edges[i], hist.x_edges[i + 1]);
            let (y0, y1) = (hist.y_edges[j], hist.y_edges[j + 1]);
            let (hx, hy) = (0.25 * (x1 - x0), 0.25 * (y1 - y0));
            let mut acc = 0.0;
            for sx in 0..2 {
                let cx = x0 + hx * (2 * sx + 1) as f64;
                for sy in 0..2 {
                    let cy = y0 + hy * (2 * sy + 1) as f64;
                    for (a, wa) in GL6_X.iter().zip(GL6_W) {
                        for (b, wb) in GL6_X.iter().zip(GL6_W) {
                            acc += wa * wb * density(cx + hx * a, cy + hy * b)?;
                        }
                    }
                }
            }
            Ok(acc * hx * hy)
        })
        .collect()
}

/// L1 distance between a 2D histogram and cell masses of an analytic density.
///
/// Samples outside the histogram box count in full; analytic mass outside the
/// box is not included.
pub fn l1_histogram_2d(hist: &Histogram2d, masses: &[f64]) -> f64 {
    let n = hist.n_seen as f64;
    let inside: f64 = hist
        .counts
        .iter()
        .zip(masses)
        .map(|(&c, &m)| (c as f64 / n - m).abs())
        .sum();
    inside + hist.outside as f64 / n
}

/// Sample mean and variance with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
}

impl SampleSummary {
    pub fn new(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::Empty(format!("need at least 2 samples for moments, got {}", xs.len())));
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in xs {
            let d = (x - mean) * (x - mean);
            m2 += d;
            m4 += d * d;
        }
        let variance = m2 / (n - 1.0);
        let m4 = m4 / n;
        let pop = m2 / n;
        Ok(Self {
            n: xs.len(),
            mean,
            mean_se: (variance / n).sqrt(),
            variance,
            variance_se: ((m4 - pop * pop).max(0.0) / n).sqrt(),
        })
    }

    /// `|mean - target|` in units of the standard error.
    pub fn mean_z(&self, target: f64) -> f64 {
        if self.mean_se == 0.0 {
            return if self.mean == target { 0.0 } else { f64::INFINITY };
        }
        (self.mean - target).abs() / self.mean_se
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::normal_cdf;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn uniform_histogram_is_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..1_000_000).map(|_| rng.random::<f64>()).collect();
        let h = Histogram::new(&xs, 0.0, 1.0, 100).unwrap();
        // multinomial sd of a bin density: sqrt(p(1-p)/n)/p with p = 0.01
        let sd = (0.01f64 * 0.99 / 1e6).sqrt() / 0.01;
        assert!(h.densities.iter().all(|d| (d - 1.0).abs() < 5.0 * sd));
        let integral: f64 = h.densities.iter().zip(h.edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum();
        assert!((integral - 1.0).abs() < 1e-12);
        assert_eq!(h.counts.iter().sum::<u64>(), 1_000_000);
    }

    #[test]
    fn degenerate_and_overflow() {
        let h = Histogram::new(&[0.3; 17], 0.0, 1.0, 10).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        let h = Histogram::new(&[0.2, 1.5, 0.4, 1.0, -0.1], 0.0, 1.0, 4).unwrap();
        assert_eq!((h.overflow, h.underflow, h.total), (1, 1, 3));
        assert_eq!(h.counts[3], 1);
        assert!(Histogram::new(&[], 0.0, 1.0, 10).is_err());
        assert!(Histogram::new(&[0.5], 0.0, 1.0, 1).is_err());
        let h = Histogram::with_binning(&[1.5, 20.0, 300.0], 1.0, 1000.0, 3, Binning::Log).unwrap();
        assert_eq!(h.counts, vec![1, 1, 1]);
    }

    #[test]
    fn ks_examples() {
        assert!((ks_distance(&[0.0], normal_cdf).unwrap() - 0.5).abs() < 1e-15);
        // sup |Phi(x) - Phi(x - 1)| at x = 1/2
        let expected = 2.0 * normal_cdf(0.5) - 1.0;
        assert!((expected - 0.3829).abs() < 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let d = ks_distance(&xs, |x| normal_cdf(x - 1.0)).unwrap();
        assert!((d - expected).abs() < 0.01, "{d}");
        let d0 = ks_distance(&xs, normal_cdf).unwrap();
        assert!(d0 < ks_critical(xs.len(), 0.01), "{d0}");
        assert!(matches!(
            ks_distance(&[0.1, 0.2, 0.3], |x| 1.0 - x),
            Err(Error::NonMonotoneCdf { .. })
        ));
    }

    #[test]
    fn two_sample_ks() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0, 0.1], &[5.0, 6.0]).unwrap(), 1.0);
        assert!((ks_coefficient(0.01) - 1.6276).abs() < 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: Vec<f64> = (0..10_000).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..10_000).map(|_| rng.random()).collect();
        assert!(ks_two_sample(&a, &b).unwrap() < ks_critical_two_sample(10_000, 10_000, 0.01));
    }

    #[test]
    fn tabulated_cdf_of_arcsine() {
        let density = |x: f64| Ok(1.0 / (std::f64::consts::PI * (x * (1.0 - x)).sqrt()));
        let cdf = TabulatedCdf::build(density, 0.0, 1.0, 1024).unwrap();
        assert!((cdf.mass - 1.0).abs() < 1e-8, "{}", cdf.mass);
        for &x in &[1e-6f64, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let exact = 2.0 / std::f64::consts::PI * x.sqrt().asin();
            assert!((cdf.eval(x) - exact).abs() < 1e-5, "{x}");
        }
        let (m, v) = cdf.moments();
        assert!((m - 0.5).abs() < 1e-6 && (v - 0.125).abs() < 1e-5, "{m} {v}");
    }

    #[test]
    fn ks_stable_under_refinement() {
        let density = |x: f64| Ok(3.0 * x * x);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>().cbrt()).collect();
        let coarse = TabulatedCdf::build(density, 0.0, 1.0, 1024).unwrap().ks(&xs).unwrap();
        let fine = TabulatedCdf::build(density, 0.0, 1.0, 4096).unwrap().ks(&xs).unwrap();
        assert!((coarse - fine).abs() < 1e-3);
    }

    #[test]
    fn negative_density_rejected() {
        let r = TabulatedCdf::build(|x: f64| Ok(x - 0.5), 0.0, 1.0, 64);
        assert!(matches!(r, Err(Error::NonMonotoneCdf { .. })));
    }

    #[test]
    fn l1_of_exact_law_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xs: Vec<f64> = (0..200_000).map(|_| rng.random()).collect();
        let h = Histogram::new(&xs, 0.0, 1.0, 50).unwrap();
        let cdf = TabulatedCdf::build(|_| Ok(1.0), 0.0, 1.0, 256).unwrap();
        assert!(l1_histogram(&h, &cdf) < 0.02);
        let pts: Vec<(f64, f64)> = xs.chunks(2).map(|c| (c[0], c[1])).collect();
        let h2 = Histogram2d::new(&pts, (0.0, 1.0), (0.0, 1.0), (20, 20)).unwrap();
        let m = cell_masses_2d(&h2, |x, y| Ok(4.0 * x * y)).unwrap();
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let flat = cell_masses_2d(&h2, |_, _| Ok(1.0)).unwrap();
        assert!(l1_histogram_2d(&h2, &flat) < l1_histogram_2d(&h2, &m));
    }

    #[test]
    fn summary_standard_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let s = SampleSummary::new(&xs).unwrap();
        assert!((s.mean_se - 1.0 / 100_000f64.sqrt()).abs() < 1e-4);
        // var of the sample variance of a unit normal is 2/n
        assert!((s.variance_se - (2.0f64 / 1e5).sqrt()).abs() < 2e-4);
        assert!(s.mean_z(0.0) < 5.0);
        assert!(SampleSummary::new(&[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn histogram_conserves_counts(xs in prop::collection::vec(-0.5f64..1.5, 1..400), bins in 2usize..40) {
            let h = Histogram::new(&xs, 0.0, 1.0, bins).unwrap();
            prop_assert_eq!(h.n_seen() as usize, xs.len());
            if h.total > 0 {
                let integral: f64 = h.densities.iter().zip(h.edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum();
                prop_assert!((integral - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn ks_in_unit_interval(xs in prop::collection::vec(-3.0f64..3.0, 1..200)) {
            let d = ks_distance(&xs, normal_cdf).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
            prop_assert!(d >= 0.5 / xs.len() as f64 - 1e-12);
        }
    }
}
