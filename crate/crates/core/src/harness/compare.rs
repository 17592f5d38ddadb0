//! Monte Carlo versus analytic comparisons and parameter scans.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::criteria::{Criteria, CriterionResult, Thresholds};
use super::stats::{
    cell_masses_2d, ks_critical, l1_histogram, l1_histogram_2d, Histogram, Histogram2d, SampleSummary, TabulatedCdf,
};
use crate::analytic::{gaussian_limit_params, AxisSpec, Evaluator, FormulaId, PdfGrid};
use crate::error::{Error, Result};
use crate::observables::{evaluate, mean_amplitudes, ScatteringPoint};
use crate::p0::{P0Kind, P0Model, DEFAULT_CALIBRATION_SAMPLES};
use crate::rmt::{sample_stream, EnsembleConfig, GreensSample};
use crate::scales::ControlParams;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Stream index reserved for `P0` calibration draws.
const CALIBRATION_STREAM: u64 = u64::MAX;

/// Child seed `index` of `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.set_word_pos(1 << 40);
    rng.next_u64()
}

/// Where the `P0` model of a comparison comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P0Source {
    /// Formula needs no model.
    None,
    Weak,
    Strong,
    /// Calibrated on a fresh ensemble run with a derived seed.
    Empirical { n_calib: usize },
    /// A prebuilt model, typically loaded from JSON.
    Model(P0Model),
}

impl P0Source {
    pub fn empirical() -> Self {
        P0Source::Empirical {
            n_calib: DEFAULT_CALIBRATION_SAMPLES,
        }
    }

    /// Builds or returns the model for an ensemble; `None` for [`P0Source::None`].
    pub fn resolve(&self, ensemble: &EnsembleConfig) -> Result<Option<P0Model>> {
        let gamma = ensemble.gamma;
        Ok(match self {
            P0Source::None => None,
            P0Source::Weak => Some(P0Model::weak(gamma)?),
            P0Source::Strong => Some(P0Model::strong(gamma)?),
            P0Source::Model(m) => Some(m.clone()),
            P0Source::Empirical { n_calib } => Some(calibrate_p0(ensemble, *n_calib)?),
        })
    }
}

/// Empirical `P0` from `n_calib` fresh draws of the ensemble.
pub fn calibrate_p0(ensemble: &EnsembleConfig, n_calib: usize) -> Result<P0Model> {
    let seed = derive_seed(ensemble.seed, CALIBRATION_STREAM);
    let cfg = EnsembleConfig {
        seed,
        n_samples: n_calib,
        ..*ensemble
    };
    let xs: Vec<f64> = sample_stream(&cfg)?.iter().map(|s| s.x).collect();
    P0Model::empirical(&xs, ensemble.gamma, Some(seed)).map_err(|e| e.context("calibrating P0"))
}

/// Everything that determines a comparison run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub ensemble: EnsembleConfig,
    pub params: ControlParams,
    pub formula: FormulaId,
    pub p0: P0Source,
    /// 1D histogram bins.
    pub bins: usize,
    /// 2D histogram bins per axis.
    pub bins_2d: usize,
    /// Base cells of the tabulated CDF.
    pub cdf_cells: usize,
    /// Points per axis of the emitted density grid.
    pub grid_points: usize,
    /// 2D box; `None` uses the formula support.
    pub box_2d: Option<[(f64, f64); 2]>,
}

impl CompareConfig {
    pub fn new(ensemble: EnsembleConfig, params: ControlParams, formula: FormulaId, p0: P0Source) -> Self {
        Self {
            ensemble,
            params,
            formula,
            p0,
            bins: 100,
            bins_2d: 50,
            cdf_cells: 1024,
            grid_points: 401,
            box_2d: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        self.params.validate()?;
        if self.ensemble.gamma != self.params.gamma {
            return Err(Error::Validation(format!(
                "ensemble gamma {} differs from control gamma {}",
                self.ensemble.gamma, self.params.gamma
            )));
        }
        if self.formula.needs_p0() == matches!(self.p0, P0Source::None) {
            return Err(Error::Validation(if self.formula.needs_p0() {
                format!("formula {} needs a P0 model", self.formula)
            } else {
                format!("formula {} takes no P0 model", self.formula)
            }));
        }
        Ok(())
    }
}

/// Sample mean of one complex amplitude against its analytic value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMean {
    pub name: String,
    pub analytic: f64,
    pub re: SampleSummary,
    pub im: SampleSummary,
}

/// Summary statistics shared by `compare` reports and scan cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub eta: f64,
    pub gamma: f64,
    pub seed: u64,
    pub n_samples: usize,
    pub mean_v: SampleSummary,
    pub amplitudes: Vec<AmplitudeMean>,
    pub sqrt_t: SampleSummary,
    pub theta: SampleSummary,
    /// Gaussian-limit variances; absent at `gamma = 0`.
    pub sigma2_t: Option<f64>,
    pub sigma2_theta: Option<f64>,
    pub variance_ratio_sqrt_t: Option<f64>,
    pub variance_ratio_theta: Option<f64>,
}

pub fn summarize(
    samples: &[GreensSample],
    points: &[ScatteringPoint],
    params: &ControlParams,
    seed: u64,
) -> Result<CellSummary> {
    let column = |f: &dyn Fn(&ScatteringPoint) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let (mt, mrp, mrm) = mean_amplitudes(params);
    let amp = |name: &str, analytic: f64, f: &dyn Fn(&ScatteringPoint) -> Complex64| -> Result<AmplitudeMean> {
        Ok(AmplitudeMean {
            name: name.into(),
            analytic,
            re: SampleSummary::new(&column(&|p| f(p).re))?,
            im: SampleSummary::new(&column(&|p| f(p).im))?,
        })
    };
    let amplitudes = vec![
        amp("t", mt, &|p| p.t)?,
        amp("r_plus", mrp, &|p| p.r_plus)?,
        amp("r_minus", mrm, &|p| p.r_minus)?,
    ];
    let sqrt_t = SampleSummary::new(&column(&|p| p.transmission.sqrt()))?;
    let theta = SampleSummary::new(&column(&|p| p.theta_t))?;
    let (sigma2_t, sigma2_theta) = if params.gamma > 0.0 {
        let g = gaussian_limit_params(params.eta, params.gamma);
        (Some(g.sigma2_t), Some(g.sigma2_theta))
    } else {
        (None, None)
    };
    Ok(CellSummary {
        eta: params.eta,
        gamma: params.gamma,
        seed,
        n_samples: samples.len(),
        mean_v: SampleSummary::new(&samples.iter().map(|s| s.v).collect::<Vec<_>>())?,
        amplitudes,
        variance_ratio_sqrt_t: sigma2_t.map(|s| sqrt_t.variance / s),
        variance_ratio_theta: sigma2_theta.map(|s| theta.variance / s),
        sqrt_t,
        theta,
        sigma2_t,
        sigma2_theta,
    })
}

/// Observable matched to each formula's axes.
pub fn observable_1d(formula: FormulaId, p: &ScatteringPoint) -> f64 {
    match formula.variables().first().copied() {
        Some("R") => p.reflection_plus,
        Some("theta") => p.theta_t,
        Some("rho") => p.rho,
        _ => p.transmission,
    }
}

pub fn observable_2d(formula: FormulaId, p: &ScatteringPoint) -> (f64, f64) {
    match formula {
        FormulaId::JointRt => (p.reflection_plus, p.transmission),
        _ => (p.transmission, p.theta_t),
    }
}

/// Tight box around 2D samples, padded by 2% per side and clipped to the support.
pub fn fit_box(points: &[(f64, f64)], support: &[(f64, f64)]) -> [(f64, f64); 2] {
    let mut b = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    for &(x, y) in points {
        b[0] = (b[0].0.min(x), b[0].1.max(x));
        b[1] = (b[1].0.min(y), b[1].1.max(y));
    }
    for (k, axis) in b.iter_mut().enumerate() {
        let pad = 0.02 * (axis.1 - axis.0).max(1e-9);
        *axis = ((axis.0 - pad).max(support[k].0), (axis.1 + pad).min(support[k].1));
    }
    b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub toolkit_version: String,
    /// Seconds since the epoch; the only field that differs between reruns.
    pub created_unix: u64,
    pub formula_id: String,
    pub asymptotic: bool,
    pub variables: Vec<String>,
    pub params: ControlParams,
    pub ensemble: EnsembleConfig,
    pub p0_kind: Option<P0Kind>,
    pub p0_seed: Option<u64>,
    pub n_samples: usize,
    pub ks_statistic: Option<f64>,
    /// 99% one-sample critical value `1.628 / sqrt(n)`.
    pub ks_critical_99: Option<f64>,
    pub l1_distance: Option<f64>,
    /// Integral of the analytic density over the support.
    pub analytic_mass: Option<f64>,
    pub sample_moments: Option<SampleSummary>,
    /// Mean and variance of the normalized analytic law.
    pub analytic_mean: Option<f64>,
    pub analytic_variance: Option<f64>,
    pub summary: CellSummary,
    pub thresholds: Thresholds,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub enum HistogramData {
    None,
    OneD(Histogram),
    TwoD(Histogram2d),
}

/// Report plus the data behind it.
#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub report: ComparisonReport,
    pub grid: Option<PdfGrid>,
    pub histogram: HistogramData,
    pub samples: Vec<GreensSample>,
    pub points: Vec<ScatteringPoint>,
    pub p0: Option<P0Model>,
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Samples the ensemble and compares with the configured formula.
pub fn compare(config: &CompareConfig, criteria: &Criteria) -> Result<CompareOutput> {
    config.validate()?;
    let samples = sample_stream(&config.ensemble).map_err(|e| e.context("sampling"))?;
    compare_samples(config, criteria, samples)
}

/// As [`compare`], on existing samples (e.g. read from a run directory).
pub fn compare_samples(config: &CompareConfig, criteria: &Criteria, samples: Vec<GreensSample>) -> Result<CompareOutput> {
    config.validate()?;
    let params = config.params;
    let formula = config.formula;
    let thresholds = criteria.for_formula(formula);
    let points: Vec<ScatteringPoint> = samples.par_iter().map(|s| evaluate(s, &params)).collect();
    let summary = summarize(&samples, &points, &params, config.ensemble.seed)?;

    let mut crit = Vec::new();
    if params.gamma > 0.0 {
        crit.push(CriterionResult::at_most(
            "finite_n_mean_v",
            (summary.mean_v.mean - 1.0).abs(),
            thresholds.mean_v_tol,
        ));
    }

    let mut report = ComparisonReport {
        toolkit_version: TOOLKIT_VERSION.to_string(),
        created_unix: now_unix(),
        formula_id: formula.name().to_string(),
        asymptotic: formula.asymptotic(),
        variables: formula.variables().iter().map(|s| s.to_string()).collect(),
        params,
        ensemble: config.ensemble,
        p0_kind: None,
        p0_seed: None,
        n_samples: samples.len(),
        ks_statistic: None,
        ks_critical_99: None,
        l1_distance: None,
        analytic_mass: None,
        sample_moments: None,
        analytic_mean: None,
        analytic_variance: None,
        summary,
        thresholds,
        criteria: Vec::new(),
        passed: false,
    };

    if formula == FormulaId::Means {
        for a in &report.summary.amplitudes {
            crit.push(CriterionResult::at_most(
                format!("mean_{}_re_sigmas", a.name),
                a.re.mean_z(a.analytic),
                thresholds.moment_sigmas,
            ));
            crit.push(CriterionResult::at_most(
                format!("mean_{}_im_sigmas", a.name),
                a.im.mean_z(0.0),
                thresholds.moment_sigmas,
            ));
        }
        report.passed = crit.iter().all(|c| c.passed);
        report.criteria = crit;
        return Ok(CompareOutput {
            report,
            grid: None,
            histogram: HistogramData::None,
            samples,
            points,
            p0: None,
        });
    }

    let p0 = config.p0.resolve(&config.ensemble)?;
    report.p0_kind = p0.as_ref().map(|m| m.kind());
    report.p0_seed = p0.as_ref().and_then(|m| m.seed());
    let ev = Evaluator::new(formula, params, p0.clone())?;
    let support = formula.support();

    let (grid, histogram) = if formula.dims() == 1 {
        let (lo, hi) = support[0];
        let xs: Vec<f64> = points.iter().map(|p| observable_1d(formula, p)).collect();
        let cdf = TabulatedCdf::build(|x| ev.density(x), lo, hi, config.cdf_cells)
            .map_err(|e| e.context(format!("tabulating the CDF of {formula}")))?;
        let hist = Histogram::new(&xs, lo, hi, config.bins)?;
        let ks = cdf.ks(&xs)?;
        let (mean, var) = cdf.moments();
        report.ks_statistic = Some(ks);
        report.ks_critical_99 = Some(ks_critical(xs.len(), 0.01));
        report.l1_distance = Some(l1_histogram(&hist, &cdf));
        report.analytic_mass = Some(cdf.mass);
        report.sample_moments = Some(SampleSummary::new(&xs)?);
        report.analytic_mean = Some(mean);
        report.analytic_variance = Some(var);
        crit.push(CriterionResult::at_most("ks", ks, thresholds.ks_max));
        if !formula.asymptotic() {
            crit.push(CriterionResult::at_most(
                "normalization",
                (cdf.mass - 1.0).abs(),
                thresholds.normalization_tol,
            ));
        }
        let grid = PdfGrid::tabulate_1d(&ev, AxisSpec::new(lo, hi, config.grid_points)?)?;
        (grid, HistogramData::OneD(hist))
    } else {
        let pts: Vec<(f64, f64)> = points.iter().map(|p| observable_2d(formula, p)).collect();
        let bx = config.box_2d.unwrap_or([support[0], support[1]]);
        let n = config.bins_2d;
        let hist = Histogram2d::new(&pts, bx[0], bx[1], (n, n))?;
        let masses = cell_masses_2d(&hist, |x, y| ev.density2(x, y))?;
        let l1 = l1_histogram_2d(&hist, &masses);
        report.l1_distance = Some(l1);
        report.analytic_mass = Some(masses.iter().sum());
        crit.push(CriterionResult::at_most("l1", l1, thresholds.l1_max));
        let grid = PdfGrid::tabulate_2d(
            &ev,
            AxisSpec::new(bx[0].0, bx[0].1, config.grid_points.min(201))?,
            AxisSpec::new(bx[1].0, bx[1].1, config.grid_points.min(201))?,
        )?;
        (grid, HistogramData::TwoD(hist))
    };
    report.passed = crit.iter().all(|c| c.passed);
    report.criteria = crit;
    Ok(CompareOutput {
        report,
        grid: Some(grid),
        histogram,
        samples,
        points,
        p0,
    })
}

/// Cartesian scan over `eta x gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub etas: Vec<f64>,
    pub gammas: Vec<f64>,
    /// Template for each cell; its `gamma` and `eta` are overridden.
    pub ensemble: EnsembleConfig,
    pub params: ControlParams,
}

/// Cells beyond this need an explicit override.
pub const MAX_SCAN_CELLS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub toolkit_version: String,
    pub config: ScanConfig,
    pub cells: Vec<CellSummary>,
    pub criteria: Vec<CriterionResult>,
}

impl ScanConfig {
    pub fn cells(&self) -> Vec<(EnsembleConfig, ControlParams)> {
        let n_cells = self.etas.len() * self.gammas.len();
        let mut out = Vec::with_capacity(n_cells);
        for &gamma in &self.gammas {
            for &eta in &self.etas {
                let idx = out.len() as u64;
                let seed = if n_cells > 1 { derive_seed(self.ensemble.seed, idx) } else { self.ensemble.seed };
                let ensemble = EnsembleConfig { gamma, seed, ..self.ensemble };
                let params = ControlParams { eta, gamma, ..self.params };
                out.push((ensemble, params));
            }
        }
        out
    }
}

pub fn scan(config: &ScanConfig, criteria: &Criteria, force: bool) -> Result<ScanReport> {
    let cells = config.cells();
    if cells.is_empty() {
        return Err(Error::Validation("empty scan grid".into()));
    }
    if cells.len() > MAX_SCAN_CELLS && !force {
        return Err(Error::Validation(format!(
            "scan of {} cells exceeds {MAX_SCAN_CELLS}; pass --force to run it",
            cells.len()
        )));
    }
    let summaries = cells
        .par_iter()
        .map(|(ens, params)| {
            params.validate()?;
            let samples = sample_stream(ens)?;
            let points: Vec<ScatteringPoint> = samples.iter().map(|s| evaluate(s, params)).collect();
            summarize(&samples, &points, params, ens.seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let th = criteria.defaults;
    let mut crit = Vec::new();
    for c in &summaries {
        let tag = format!("eta={},gamma={}", c.eta, c.gamma);
        if let Some(t) = c.amplitudes.first() {
            crit.push(CriterionResult::at_most(format!("{tag}:mean_t_sigmas"), t.re.mean_z(t.analytic), th.moment_sigmas));
        }
        if let (Some(a), Some(b)) = (c.variance_ratio_sqrt_t, c.variance_ratio_theta) {
            crit.push(CriterionResult::at_most(format!("{tag}:var_sqrt_t_ratio"), (a - 1.0).abs(), th.variance_ratio_tol));
            crit.push(CriterionResult::at_most(format!("{tag}:var_theta_ratio"), (b - 1.0).abs(), th.variance_ratio_tol));
        }
    }
    Ok(ScanReport {
        toolkit_version: TOOLKIT_VERSION.to_string(),
        config: config.clone(),
        cells: summaries,
        criteria: crit,
    })
}
