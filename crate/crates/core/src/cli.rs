//! Command-line front-end: `sample`, `eval`, `compare`, `scan` and `calibrate`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{AxisSpec, Evaluator, FormulaId, PdfGrid};
use crate::error::{Error, Result};
use crate::harness::compare::{fit_box, observable_2d};
use crate::harness::{
    calibrate_p0, compare, compare_samples, derive_seed, scan, CompareConfig, CompareOutput, Criteria, HistogramData,
    P0Source, ScanConfig,
};
use crate::io::{self, Manifest};
use crate::observables::evaluate;
use crate::p0::{P0Model, DEFAULT_CALIBRATION_SAMPLES};
use crate::rmt::{sample_stream, EnsembleConfig, GreensSample, Sampler};
use crate::scales::{control_params, ControlParams, ResonanceSpec};

#[derive(Debug, Parser)]
#[command(name = "resonance-stats", version, about = "Scattering statistics of a resonance on an absorbing chaotic background")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw Green's-function samples and their observables.
    Sample(SampleArgs),
    /// Tabulate an analytic density on a grid.
    Eval(EvalArgs),
    /// Compare Monte Carlo samples with an analytic density.
    Compare(CompareArgs),
    /// Summary statistics over an eta x gamma grid.
    Scan(ScanArgs),
    /// Build an empirical P0 model and save it as JSON.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    /// Background coupling; comma-separated values fan out.
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    /// Absorption rate; comma-separated values fan out.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// Direct transmission amplitude (default 1, perfect coupling).
    #[arg(long, conflicts_with = "phi")]
    pub t0: Option<f64>,
    /// Channel-mixing angle; `t0 = sin 2 phi`.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Sign of the direct reflection `r0` when `--t0` is given.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r0_sign: f64,
    /// JSON file with a `spec` or `control` block instead of the flags above.
    #[arg(long, conflicts_with_all = ["eta", "gamma", "t0", "phi"])]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Background dimension N.
    #[arg(long)]
    pub matrix_size: Option<usize>,
    #[arg(long)]
    pub sampler: Option<Sampler>,
    /// Random when omitted; recorded in the manifest either way.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub const DEFAULT_N_SAMPLES: usize = 100_000;
pub const DEFAULT_MATRIX_SIZE: usize = 400;

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Output root (default `$RESONANCE_STATS_OUT`, else `./runs`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub formula: FormulaId,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// weak | strong | empirical:<file>
    #[arg(long)]
    pub p0: Option<P0Arg>,
    /// `lo:hi:n`; give twice for 2D formulas.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Vec<AxisSpec>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub formula: FormulaId,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// weak | strong | empirical | empirical:<file>
    #[arg(long)]
    pub p0: Option<P0Arg>,
    /// Calibration draws for `--p0 empirical`.
    #[arg(long, default_value_t = DEFAULT_CALIBRATION_SAMPLES)]
    pub n_calib: usize,
    /// Existing `samples.csv`; its sibling `manifest.json` must match the flags.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Fit the 2D histogram box to the samples instead of the full support.
    #[arg(long)]
    pub zoom: bool,
    /// Threshold file (TOML); defaults to the bundled criteria.
    #[arg(long)]
    pub criteria: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Allow grids larger than the default cell limit.
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub criteria: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub gamma: f64,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `--p0` value.
#[derive(Debug, Clone, PartialEq)]
pub enum P0Arg {
    Weak,
    Strong,
    Empirical(Option<PathBuf>),
}

impl FromStr for P0Arg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(P0Arg::Weak),
            "strong" => Ok(P0Arg::Strong),
            "empirical" => Ok(P0Arg::Empirical(None)),
            _ => match s.strip_prefix("empirical:") {
                Some(path) if !path.is_empty() => Ok(P0Arg::Empirical(Some(PathBuf::from(path)))),
                _ => Err(Error::Parse(format!("bad --p0 `{s}`: expected weak, strong, empirical or empirical:<file>"))),
            },
        }
    }
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    spec: Option<ResonanceSpec>,
    control: Option<ControlBlock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlBlock {
    eta: f64,
    gamma: f64,
    #[serde(default = "one")]
    t0: f64,
    #[serde(default = "one")]
    r0_sign: f64,
}

fn one() -> f64 {
    1.0
}

impl PhysicsArgs {
    /// Control parameters for every `(gamma, eta)` combination.
    pub fn param_sets(&self) -> Result<Vec<ControlParams>> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            let file: ConfigFile =
                serde_json::from_str(&text).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
            let params = match (file.spec, file.control) {
                (Some(spec), None) => control_params(&spec)?,
                (None, Some(c)) => ControlParams::from_t0(c.eta, c.gamma, c.t0, c.r0_sign)?,
                _ => {
                    return Err(Error::Validation(format!(
                        "{}: exactly one of `spec` or `control` is required",
                        path.display()
                    )))
                }
            };
            params.validate()?;
            return Ok(vec![params]);
        }
        if self.eta.is_empty() || self.gamma.is_empty() {
            return Err(Error::Validation("--eta and --gamma are required (or --config)".into()));
        }
        let mut out = Vec::new();
        for &gamma in &self.gamma {
            for &eta in &self.eta {
                let p = match self.phi {
                    Some(phi) => ControlParams::from_phi(eta, gamma, phi),
                    None => ControlParams::from_t0(eta, gamma, self.t0.unwrap_or(1.0), self.r0_sign)?,
                };
                p.validate()?;
                out.push(p);
            }
        }
        Ok(out)
    }
}

impl EnsembleArgs {
    /// Ensemble for `gamma`; draws and flags a random seed when none is given.
    fn ensemble(&self, gamma: f64, default_seed: &mut Option<u64>) -> (EnsembleConfig, bool) {
        let (seed, random) = match self.seed {
            Some(s) => (s, false),
            None => (*default_seed.get_or_insert_with(|| rand::rng().random()), true),
        };
        let cfg = EnsembleConfig {
            n_levels: self.matrix_size.unwrap_or(DEFAULT_MATRIX_SIZE),
            gamma,
            sampler: self.sampler.unwrap_or_default(),
            seed,
            n_samples: self.n_samples.unwrap_or(DEFAULT_N_SAMPLES),
        };
        (cfg, random)
    }
}

/// Per-run seeds: the base seed for a single run, derived seeds when fanning out.
fn fan_out(params: Vec<ControlParams>, ens: &EnsembleArgs) -> (Vec<(EnsembleConfig, ControlParams)>, bool) {
    let mut seed = None;
    let n = params.len();
    let mut random = false;
    let runs = params
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let (mut e, r) = ens.ensemble(p.gamma, &mut seed);
            random |= r;
            if n > 1 {
                e.seed = derive_seed(e.seed, i as u64);
            }
            (e, p)
        })
        .collect();
    (runs, random)
}

#[derive(Debug, Serialize)]
struct SampleRun<'a> {
    command: &'static str,
    ensemble: &'a EnsembleConfig,
    params: &'a ControlParams,
}

fn cmd_sample(args: &SampleArgs) -> Result<Vec<PathBuf>> {
    let (runs, random) = fan_out(args.physics.param_sets()?, &args.ensemble);
    let root = io::output_root(args.out.as_deref());
    runs.par_iter()
        .map(|(ens, params)| {
            let run = SampleRun {
                command: "sample",
                ensemble: ens,
                params,
            };
            let dir = io::run_dir(&root, "sample", &run)?;
            let samples = sample_stream(ens)?;
            let points: Vec<_> = samples.iter().map(|s| evaluate(s, params)).collect();
            io::write_samples(&dir.join("samples.csv"), &samples)?;
            io::write_observables(&dir.join("observables.csv"), &points)?;
            let mut m = Manifest::new(ens, params, serde_json::to_value(&run)?);
            m.random_seed = random;
            m.save(&dir.join("manifest.json"))?;
            println!("sample eta={} gamma={} seed={} -> {}", params.eta, params.gamma, ens.seed, dir.display());
            Ok(dir)
        })
        .collect()
}

fn resolve_p0_arg(arg: Option<&P0Arg>, gamma: f64) -> Result<Option<P0Model>> {
    Ok(match arg {
        None => None,
        Some(P0Arg::Weak) => Some(P0Model::weak(gamma)?),
        Some(P0Arg::Strong) => Some(P0Model::strong(gamma)?),
        Some(P0Arg::Empirical(Some(path))) => Some(P0Model::load(path)?),
        Some(P0Arg::Empirical(None)) => {
            return Err(Error::Validation(
                "eval needs a saved model: --p0 empirical:<file> (see `calibrate`)".into(),
            ))
        }
    })
}

fn default_axes(formula: FormulaId) -> Vec<AxisSpec> {
    let n = if formula.dims() == 2 { 101 } else { 512 };
    formula
        .support()
        .into_iter()
        .map(|(lo, hi)| AxisSpec { lo, hi, n })
        .collect()
}

#[derive(Debug, Serialize)]
struct EvalRun<'a> {
    command: &'static str,
    formula: FormulaId,
    params: &'a ControlParams,
    p0: Option<&'a P0Model>,
    grid: &'a [AxisSpec],
}

pub fn tabulate(ev: &Evaluator, axes: &[AxisSpec]) -> Result<PdfGrid> {
    match (ev.formula.dims(), axes) {
        (1, [x]) => PdfGrid::tabulate_1d(ev, *x),
        (2, [x, y]) => PdfGrid::tabulate_2d(ev, *x, *y),
        (d, _) => Err(Error::Validation(format!(
            "formula {} is {d}-dimensional but {} --grid specs were given",
            ev.formula,
            axes.len()
        ))),
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<Vec<PathBuf>> {
    let root = io::output_root(args.out.as_deref());
    let axes = if args.grid.is_empty() { default_axes(args.formula) } else { args.grid.clone() };
    args.physics
        .param_sets()?
        .par_iter()
        .map(|params| {
            Evaluator::check(args.formula, params)?;
            let p0 = if args.formula.needs_p0() {
                resolve_p0_arg(args.p0.as_ref(), params.gamma)?
            } else {
                None
            };
            let ev = Evaluator::new(args.formula, *params, p0)?;
            let grid = tabulate(&ev, &axes)?;
            let run = EvalRun {
                command: "eval",
                formula: args.formula,
                params,
                p0: ev.p0.as_ref(),
                grid: &axes,
            };
            let dir = io::run_dir(&root, "eval", &run)?;
            io::write_grid(&dir, "density", &grid)?;
            io::write_json(&dir.join("run.json"), &run)?;
            let note = if axes.len() == 1 {
                let mass = ev.normalization()?;
                io::write_json(&dir.join("normalization.json"), &serde_json::json!({ "integral": mass }))?;
                format!(" integral {mass:.10}")
            } else {
                String::new()
            };
            println!("eval {} eta={} gamma={}{note} -> {}", args.formula, params.eta, params.gamma, dir.display());
            Ok(dir)
        })
        .collect()
}

fn p0_source(arg: Option<&P0Arg>, n_calib: usize) -> Result<P0Source> {
    Ok(match arg {
        None => P0Source::None,
        Some(P0Arg::Weak) => P0Source::Weak,
        Some(P0Arg::Strong) => P0Source::Strong,
        Some(P0Arg::Empirical(None)) => P0Source::Empirical { n_calib },
        Some(P0Arg::Empirical(Some(path))) => P0Source::Model(P0Model::load(path)?),
    })
}

fn load_criteria(path: Option<&Path>) -> Result<Criteria> {
    match path {
        Some(p) => Criteria::load(p),
        None => Ok(Criteria::default()),
    }
}

/// Reads `--samples` and checks its manifest against the requested run.
fn load_samples(path: &Path, params: &ControlParams, ens: &EnsembleArgs) -> Result<(EnsembleConfig, Vec<GreensSample>)> {
    let manifest_path = path.with_file_name("manifest.json");
    let found = Manifest::load(&manifest_path)?;
    let mut wanted = found.clone();
    wanted.eta = params.eta;
    wanted.gamma = params.gamma;
    wanted.t0 = params.t0;
    wanted.r0 = params.r0;
    if let Some(s) = ens.seed {
        wanted.seed = s;
    }
    if let Some(n) = ens.matrix_size {
        wanted.n_levels = n;
    }
    if let Some(n) = ens.n_samples {
        wanted.n_samples = n;
    }
    if let Some(s) = ens.sampler {
        wanted.sampler = s;
    }
    let diff = wanted.diff(&found);
    if !diff.is_empty() {
        return Err(Error::Validation(format!(
            "samples in {} do not match the requested run (requested != manifest):\n  {}",
            path.display(),
            diff.join("\n  ")
        )));
    }
    let samples = io::read_samples(path)?;
    if samples.len() != found.n_samples {
        return Err(Error::Validation(format!(
            "{} holds {} samples but its manifest says {}",
            path.display(),
            samples.len(),
            found.n_samples
        )));
    }
    Ok((found.ensemble(), samples))
}

pub fn write_compare_outputs(dir: &Path, out: &CompareOutput, manifest: &Manifest) -> Result<()> {
    io::write_json(&dir.join("report.json"), &out.report)?;
    if let Some(grid) = &out.grid {
        io::write_grid(dir, "density", grid)?;
    }
    match &out.histogram {
        HistogramData::OneD(h) => io::write_histogram(&dir.join("histogram.csv"), h)?,
        HistogramData::TwoD(h) => io::write_histogram_2d(&dir.join("histogram.csv"), h)?,
        HistogramData::None => {}
    }
    if let Some(p0) = &out.p0 {
        p0.save(&dir.join("p0.json"))?;
    }
    io::write_samples(&dir.join("samples.csv"), &out.samples)?;
    io::write_observables(&dir.join("observables.csv"), &out.points)?;
    manifest.save(&dir.join("manifest.json"))
}

fn cmd_compare(args: &CompareArgs) -> Result<Vec<PathBuf>> {
    let criteria = load_criteria(args.criteria.as_deref())?;
    let p0 = p0_source(args.p0.as_ref(), args.n_calib)?;
    let params = args.physics.param_sets()?;
    if args.samples.is_some() && params.len() > 1 {
        return Err(Error::Validation("--samples takes a single eta and gamma".into()));
    }
    let (runs, random) = fan_out(params, &args.ensemble);
    let shared = shared_calibrations(&p0, args.formula, &runs)?;
    let root = io::output_root(args.out.as_deref());
    runs.par_iter()
        .map(|(ens, params)| {
            let p0 = match shared.iter().find(|(g, _)| *g == params.gamma) {
                Some((_, model)) => P0Source::Model(model.clone()),
                None => p0.clone(),
            };
            let (ens, given) = match &args.samples {
                Some(path) => {
                    let (e, s) = load_samples(path, params, &args.ensemble)?;
                    (e, Some(s))
                }
                None => (*ens, None),
            };
            let mut cfg = CompareConfig::new(ens, *params, args.formula, p0.clone());
            cfg.bins = args.bins;
            let out = match given {
                Some(samples) => {
                    if args.zoom && args.formula.dims() == 2 {
                        cfg.box_2d = Some(zoom_box(args.formula, &samples, params));
                    }
                    compare_samples(&cfg, &criteria, samples)?
                }
                None => {
                    if args.zoom && args.formula.dims() == 2 {
                        let samples = sample_stream(&ens)?;
                        cfg.box_2d = Some(zoom_box(args.formula, &samples, params));
                        compare_samples(&cfg, &criteria, samples)?
                    } else {
                        compare(&cfg, &criteria)?
                    }
                }
            };
            let dir = io::run_dir(&root, "compare", &cfg)?;
            let mut manifest = Manifest::new(&ens, params, serde_json::to_value(&cfg)?);
            manifest.random_seed = random && args.samples.is_none();
            write_compare_outputs(&dir, &out, &manifest)?;
            let r = &out.report;
            let stat = match (r.ks_statistic, r.l1_distance) {
                (Some(ks), _) => format!("ks={ks:.4}"),
                (None, Some(l1)) => format!("l1={l1:.4}"),
                _ => String::new(),
            };
            println!(
                "compare {} eta={} gamma={} n={} {stat} {} -> {}",
                args.formula,
                params.eta,
                params.gamma,
                r.n_samples,
                if r.passed { "PASS" } else { "FAIL" },
                dir.display()
            );
            Ok(dir)
        })
        .collect()
}

/// Calibrates one empirical P0 per distinct gamma so that a fan-out over eta
/// does not repeat the same ensemble run.
fn shared_calibrations(
    p0: &P0Source,
    formula: FormulaId,
    runs: &[(EnsembleConfig, ControlParams)],
) -> Result<Vec<(f64, P0Model)>> {
    let P0Source::Empirical { n_calib } = *p0 else { return Ok(Vec::new()) };
    if runs.len() < 2 || !formula.needs_p0() {
        return Ok(Vec::new());
    }
    let mut firsts: Vec<&EnsembleConfig> = Vec::new();
    for (ens, _) in runs {
        if !firsts.iter().any(|e| e.gamma == ens.gamma) {
            firsts.push(ens);
        }
    }
    firsts
        .into_iter()
        .map(|ens| Ok((ens.gamma, calibrate_p0(ens, n_calib)?)))
        .collect()
}

fn zoom_box(formula: FormulaId, samples: &[GreensSample], params: &ControlParams) -> [(f64, f64); 2] {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| observable_2d(formula, &evaluate(s, params)))
        .collect();
    fit_box(&pts, &formula.support())
}

fn cmd_scan(args: &ScanArgs) -> Result<Vec<PathBuf>> {
    if args.physics.config.is_some() {
        return Err(Error::Validation("scan takes --eta and --gamma lists, not --config".into()));
    }
    if args.physics.eta.is_empty() || args.physics.gamma.is_empty() {
        return Err(Error::Validation("empty scan grid: give --eta and --gamma values".into()));
    }
    let criteria = load_criteria(args.criteria.as_deref())?;
    let template = args
        .physics
        .param_sets()?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Validation("empty scan grid".into()))?;
    let mut seed = None;
    let (ensemble, random) = args.ensemble.ensemble(template.gamma, &mut seed);
    let cfg = ScanConfig {
        etas: args.physics.eta.clone(),
        gammas: args.physics.gamma.clone(),
        ensemble,
        params: template,
    };
    let report = scan(&cfg, &criteria, args.force)?;
    let root = io::output_root(args.out.as_deref());
    let dir = io::run_dir(&root, "scan", &cfg)?;
    io::write_json(&dir.join("scan.json"), &report)?;
    let mut csv = String::from("eta,gamma,seed,mean_v,mean_t_re,mean_t_se,mean_t_analytic,var_sqrt_t,sigma2_t,var_theta,sigma2_theta\n");
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
    for c in &report.cells {
        let t = &c.amplitudes[0];
        csv.push_str(&format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{}\n",
            c.eta,
            c.gamma,
            c.seed,
            c.mean_v.mean,
            t.re.mean,
            t.re.mean_se,
            t.analytic,
            c.sqrt_t.variance,
            opt(c.sigma2_t),
            c.theta.variance,
            opt(c.sigma2_theta)
        ));
    }
    std::fs::write(dir.join("scan.csv"), csv).map_err(|e| Error::Io {
        path: dir.join("scan.csv"),
        source: e,
    })?;
    let mut manifest = Manifest::new(&ensemble, &template, serde_json::to_value(&cfg)?);
    manifest.random_seed = random;
    manifest.save(&dir.join("manifest.json"))?;
    for c in &report.cells {
        println!(
            "scan eta={} gamma={} <t>={:.5}±{:.5} (analytic {:.5}) var ratios sqrtT={} theta={}",
            c.eta,
            c.gamma,
            c.amplitudes[0].re.mean,
            c.amplitudes[0].re.mean_se,
            c.amplitudes[0].analytic,
            c.variance_ratio_sqrt_t.map(|r| format!("{r:.3}")).unwrap_or_else(|| "-".into()),
            c.variance_ratio_theta.map(|r| format!("{r:.3}")).unwrap_or_else(|| "-".into()),
        );
    }
    println!("scan -> {}", dir.display());
    Ok(vec![dir])
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<Vec<PathBuf>> {
    let mut seed = None;
    let (mut ens, random) = args.ensemble.ensemble(args.gamma, &mut seed);
    let n_calib = args.ensemble.n_samples.unwrap_or(DEFAULT_CALIBRATION_SAMPLES);
    ens.n_samples = n_calib;
    let model = calibrate_p0(&ens, n_calib)?;
    let root = io::output_root(args.out.as_deref());
    let dir = io::run_dir(&root, "calibrate", &ens)?;
    model.save(&dir.join("p0.json"))?;
    let mut manifest = Manifest::new(&ens, &ControlParams::perfect(1.0, args.gamma), serde_json::to_value(ens)?);
    manifest.random_seed = random;
    manifest.save(&dir.join("manifest.json"))?;
    println!("calibrate gamma={} n={} -> {}", args.gamma, n_calib, dir.join("p0.json").display());
    Ok(vec![dir])
}

/// Runs a parsed command line; returns the directories written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let work = || match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Calibrate(a) => cmd_calibrate(a),
    };
    match cli.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Validation(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Parses `std::env::args`, runs, and maps errors to exit codes.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
