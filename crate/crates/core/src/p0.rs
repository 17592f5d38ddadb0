//! Density `P0(x)`, `x >= 1`, of the variable `x = (u^2 + v^2 + 1) / (2 v)`
//! built from the local Green's function.
//!
//! Three interchangeable forms are provided:
//!
//! * weak absorption: `(2/sqrt(pi)) (gamma/4)^(3/2) sqrt(x+1) exp(-gamma (x+1) / 4)`
//! * strong absorption: `(gamma/4) exp(-gamma (x-1) / 4)`
//! * empirical: a histogram calibrated on Monte-Carlo draws with a fitted
//!   exponential tail, usable at any `gamma`.
//!
//! The zero-absorption limit is not a `P0Model`; lossless statistics have
//! dedicated closed forms.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum calibration sample count for the empirical model.
pub const MIN_CALIBRATION_SAMPLES: usize = 10_000;
/// Default calibration sample count.
pub const DEFAULT_CALIBRATION_SAMPLES: usize = 1_000_000;
/// Number of log-spaced histogram bins.
pub const EMPIRICAL_BINS: usize = 200;
const LOWER_QUANTILE: f64 = 0.001;
const TAIL_QUANTILE: f64 = 0.99;
/// Relative density below which `P0` is treated as zero by integrators.
pub const CUTOFF_RATIO: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P0Kind {
    WeakAsymptotic,
    StrongAsymptotic,
    Empirical,
}

impl std::fmt::Display for P0Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            P0Kind::WeakAsymptotic => "weak_asymptotic",
            P0Kind::StrongAsymptotic => "strong_asymptotic",
            P0Kind::Empirical => "empirical",
        })
    }
}

/// Serialized form of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct P0ModelJson {
    kind: P0Kind,
    gamma: f64,
    #[serde(default)]
    bin_edges: Vec<f64>,
    #[serde(default)]
    densities: Vec<f64>,
    #[serde(default)]
    x_cut: f64,
    #[serde(default)]
    s_tail: f64,
    #[serde(default)]
    a_tail: f64,
    #[serde(default)]
    n_calib: usize,
    #[serde(default)]
    seed: Option<u64>,
}

/// A normalised density on `x >= 1`.
///
/// For the empirical kind `bin_edges` are `x` values (log-spaced in `x - 1`)
/// and `densities` the normalised bin densities; the density is linearly
/// interpolated between bin centres, held flat below the first centre, and
/// replaced by `a_tail * exp(-s_tail * x)` above `x_cut`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "P0ModelJson", into = "P0ModelJson")]
pub struct P0Model {
    kind: P0Kind,
    gamma: f64,
    bin_edges: Vec<f64>,
    densities: Vec<f64>,
    x_cut: f64,
    s_tail: f64,
    a_tail: f64,
    n_calib: usize,
    seed: Option<u64>,
    // interpolation nodes, rebuilt from the fields above
    nodes_x: Vec<f64>,
    nodes_y: Vec<f64>,
}

impl From<P0Model> for P0ModelJson {
    fn from(m: P0Model) -> Self {
        Self {
            kind: m.kind,
            gamma: m.gamma,
            bin_edges: m.bin_edges,
            densities: m.densities,
            x_cut: m.x_cut,
            s_tail: m.s_tail,
            a_tail: m.a_tail,
            n_calib: m.n_calib,
            seed: m.seed,
        }
    }
}

impl TryFrom<P0ModelJson> for P0Model {
    type Error = Error;

    fn try_from(j: P0ModelJson) -> Result<Self> {
        check_gamma(j.gamma)?;
        let mut m = P0Model {
            kind: j.kind,
            gamma: j.gamma,
            bin_edges: j.bin_edges,
            densities: j.densities,
            x_cut: j.x_cut,
            s_tail: j.s_tail,
            a_tail: j.a_tail,
            n_calib: j.n_calib,
            seed: j.seed,
            nodes_x: Vec::new(),
            nodes_y: Vec::new(),
        };
        if m.kind == P0Kind::Empirical {
            if m.bin_edges.len() != m.densities.len() + 1 || m.densities.is_empty() {
                return Err(Error::Parse(format!(
                    "empirical model needs len(bin_edges) = len(densities) + 1, got {} and {}",
                    m.bin_edges.len(),
                    m.densities.len()
                )));
            }
            if !(m.s_tail > 0.0) || !(m.a_tail > 0.0) || !(m.x_cut >= 1.0) {
                return Err(Error::Parse("empirical model has an invalid tail".into()));
            }
            m.rebuild_nodes();
        }
        Ok(m)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "P0 models need gamma > 0 (got {gamma}); use the zero-absorption closed forms at gamma = 0"
        )))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("P0 is defined for x >= 1, got x = {x}")))
    }
}

/// Weak-absorption asymptotic form.
pub fn p0_weak(x: f64, gamma: f64) -> Result<f64> {
    check_x(x)?;
    check_gamma(gamma)?;
    Ok(weak_density(x, gamma))
}

/// Strong-absorption asymptotic form.
pub fn p0_strong(x: f64, gamma: f64) -> Result<f64> {
    check_x(x)?;
    check_gamma(gamma)?;
    Ok(strong_density(x, gamma))
}

fn weak_density(x: f64, gamma: f64) -> f64 {
    let g4 = 0.25 * gamma;
    2.0 / PI.sqrt() * g4.powf(1.5) * (x + 1.0).sqrt() * (-g4 * (x + 1.0)).exp()
}

fn strong_density(x: f64, gamma: f64) -> f64 {
    let g4 = 0.25 * gamma;
    g4 * (-g4 * (x - 1.0)).exp()
}

/// Sample quantile by linear interpolation on sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

impl P0Model {
    pub fn weak(gamma: f64) -> Result<Self> {
        Self::analytic(P0Kind::WeakAsymptotic, gamma)
    }

    pub fn strong(gamma: f64) -> Result<Self> {
        Self::analytic(P0Kind::StrongAsymptotic, gamma)
    }

    fn analytic(kind: P0Kind, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            kind,
            gamma,
            bin_edges: Vec::new(),
            densities: Vec::new(),
            x_cut: 0.0,
            s_tail: 0.0,
            a_tail: 0.0,
            n_calib: 0,
            seed: None,
            nodes_x: Vec::new(),
            nodes_y: Vec::new(),
        })
    }

    /// Calibrates the empirical model on `x` samples.
    ///
    /// Bins are log-spaced in `x - 1` between the 0.1th and 99th percentiles.
    /// Above the 99th percentile the density is an exponential whose rate is
    /// the maximum-likelihood estimate from the exceedances and whose weight
    /// equals the empirical exceedance fraction. The result is renormalised.
    pub fn empirical(x_samples: &[f64], gamma: f64, seed: Option<u64>) -> Result<Self> {
        check_gamma(gamma)?;
        if x_samples.len() < MIN_CALIBRATION_SAMPLES {
            return Err(Error::Calibration {
                required: MIN_CALIBRATION_SAMPLES,
                got: x_samples.len(),
            });
        }
        if let Some(bad) = x_samples.iter().find(|x| !(**x >= 1.0) || !x.is_finite()) {
            return Err(Error::Domain(format!(
                "calibration sample x = {bad} is not a finite value >= 1"
            )));
        }
        let mut sorted = x_samples.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;

        let lo = (quantile(&sorted, LOWER_QUANTILE) - 1.0).max(1e-300);
        let x_cut = quantile(&sorted, TAIL_QUANTILE);
        let hi = x_cut - 1.0;
        if !(hi > lo) {
            return Err(Error::Domain("calibration samples are degenerate".into()));
        }
        let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
        let step = (ln_hi - ln_lo) / EMPIRICAL_BINS as f64;
        let mut bin_edges: Vec<f64> = (0..=EMPIRICAL_BINS)
            .map(|i| 1.0 + (ln_lo + step * i as f64).exp())
            .collect();
        bin_edges[EMPIRICAL_BINS] = x_cut;

        let mut counts = vec![0usize; EMPIRICAL_BINS];
        for &x in &sorted {
            if x < bin_edges[0] || x >= x_cut {
                continue;
            }
            let k = bin_edges.partition_point(|&e| e <= x).saturating_sub(1);
            counts[k.min(EMPIRICAL_BINS - 1)] += 1;
        }
        let densities: Vec<f64> = counts
            .iter()
            .zip(bin_edges.windows(2))
            .map(|(&c, w)| c as f64 / (n * (w[1] - w[0])))
            .collect();

        let exceed: Vec<f64> = sorted.iter().filter(|&&x| x > x_cut).map(|x| x - x_cut).collect();
        if exceed.is_empty() {
            return Err(Error::Domain("no calibration samples above the tail cutoff".into()));
        }
        let mean_excess = exceed.iter().sum::<f64>() / exceed.len() as f64;
        let s_tail = 1.0 / mean_excess;
        let tail_mass = exceed.len() as f64 / n;
        let a_tail = tail_mass * s_tail * (s_tail * x_cut).exp();

        let mut model = Self {
            kind: P0Kind::Empirical,
            gamma,
            bin_edges,
            densities,
            x_cut,
            s_tail,
            a_tail,
            n_calib: x_samples.len(),
            seed,
            nodes_x: Vec::new(),
            nodes_y: Vec::new(),
        };
        model.rebuild_nodes();
        let norm = model.normalization();
        for d in &mut model.densities {
            *d /= norm;
        }
        model.a_tail /= norm;
        model.rebuild_nodes();
        Ok(model)
    }

    fn tail(&self, x: f64) -> f64 {
        // a e^{-s x} evaluated relative to the cut to avoid overflow of e^{s x_cut}
        self.tail_at_cut() * (-self.s_tail * (x - self.x_cut)).exp()
    }

    fn tail_at_cut(&self) -> f64 {
        self.a_tail * (-self.s_tail * self.x_cut).exp()
    }

    fn rebuild_nodes(&mut self) {
        let mut xs = Vec::with_capacity(self.densities.len() + 2);
        let mut ys = Vec::with_capacity(self.densities.len() + 2);
        xs.push(1.0);
        ys.push(self.densities[0]);
        for (d, w) in self.densities.iter().zip(self.bin_edges.windows(2)) {
            xs.push(1.0 + ((w[0] - 1.0) * (w[1] - 1.0)).sqrt());
            ys.push(*d);
        }
        // the interpolant ends on the tail value so the splice is continuous
        xs.push(self.x_cut);
        ys.push(self.tail_at_cut());
        self.nodes_x = xs;
        self.nodes_y = ys;
    }

    /// Integral of the current (unnormalised) empirical representation.
    fn normalization(&self) -> f64 {
        let body: f64 = self
            .nodes_x
            .windows(2)
            .zip(self.nodes_y.windows(2))
            .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
            .sum();
        body + self.tail_at_cut() / self.s_tail
    }

    pub fn kind(&self) -> P0Kind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tail_slope(&self) -> Option<f64> {
        (self.kind == P0Kind::Empirical).then_some(self.s_tail)
    }

    pub fn tail_cut(&self) -> Option<f64> {
        (self.kind == P0Kind::Empirical).then_some(self.x_cut)
    }

    pub fn n_calib(&self) -> usize {
        self.n_calib
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Evaluates the density; `x < 1` is a domain error.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.density(x))
    }

    /// Evaluates the density, returning 0 below `x = 1` (round-off slack of
    /// 1e-9 is absorbed into `x = 1`).
    pub fn density(&self, x: f64) -> f64 {
        if !(x >= 1.0 - 1e-9) {
            return 0.0;
        }
        let x = x.max(1.0);
        if x.is_infinite() {
            return 0.0;
        }
        match self.kind {
            P0Kind::WeakAsymptotic => weak_density(x, self.gamma),
            P0Kind::StrongAsymptotic => strong_density(x, self.gamma),
            P0Kind::Empirical => {
                if x >= self.x_cut {
                    return self.tail(x);
                }
                let xs = &self.nodes_x;
                let k = xs.partition_point(|&n| n <= x);
                if k == 0 {
                    return self.nodes_y[0];
                }
                if k >= xs.len() {
                    return self.tail(x);
                }
                let (x0, x1) = (xs[k - 1], xs[k]);
                let (y0, y1) = (self.nodes_y[k - 1], self.nodes_y[k]);
                if x1 == x0 {
                    return y1;
                }
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Points where the density is not smooth (interpolation nodes of the
    /// empirical form); empty for the closed forms.
    pub fn kinks(&self) -> &[f64] {
        &self.nodes_x
    }

    /// Largest density value.
    pub fn peak(&self) -> f64 {
        match self.kind {
            P0Kind::StrongAsymptotic => strong_density(1.0, self.gamma),
            P0Kind::WeakAsymptotic => weak_density((2.0 / self.gamma - 1.0).max(1.0), self.gamma),
            P0Kind::Empirical => self.nodes_y.iter().copied().fold(self.tail_at_cut(), f64::max),
        }
    }

    /// Point beyond which the density stays below `CUTOFF_RATIO * peak`.
    pub fn upper_cutoff(&self) -> f64 {
        let ln_ratio = CUTOFF_RATIO.ln().abs();
        match self.kind {
            P0Kind::StrongAsymptotic => 1.0 + 4.0 * ln_ratio / self.gamma,
            P0Kind::WeakAsymptotic => {
                let target = CUTOFF_RATIO * self.peak();
                let mut x = (2.0 / self.gamma).max(2.0);
                while weak_density(x, self.gamma) > target {
                    x *= 2.0;
                }
                x
            }
            P0Kind::Empirical => {
                let target = CUTOFF_RATIO * self.peak();
                let at_cut = self.tail_at_cut();
                if at_cut <= target {
                    self.x_cut
                } else {
                    self.x_cut + (at_cut / target).ln() / self.s_tail
                }
            }
        }
    }

    /// Integral over `[1, inf)`; exactly 1 for the strong and empirical forms
    /// and `Gamma(3/2, gamma/2) / Gamma(3/2)` for the weak one.
    pub fn total_mass(&self) -> f64 {
        match self.kind {
            P0Kind::StrongAsymptotic => 1.0,
            P0Kind::Empirical => self.normalization(),
            P0Kind::WeakAsymptotic => {
                // Gamma(3/2, z)/Gamma(3/2) = erfc(sqrt z) + 2 sqrt(z/pi) e^{-z}
                let z = 0.5 * self.gamma;
                libm::erfc(z.sqrt()) + 2.0 * (z / PI).sqrt() * (-z).exp()
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&s).map_err(|e| e.context(format!("loading P0 model {}", path.display())))
    }
}

/// Evaluates any model kind; `x < 1` is a domain error.
pub fn p0_eval(model: &P0Model, x: f64) -> Result<f64> {
    model.eval(x)
}

/// Builds the empirical model from calibration samples.
pub fn p0_empirical_build(x_samples: &[f64], gamma: f64) -> Result<P0Model> {
    P0Model::empirical(x_samples, gamma, None)
}
