//! Formula registry and tabulation of analytic densities on grids.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::intensity::{
    joint_rt_pdf, reflection_pdf, strong_absorption_transmission_pdf, transmission_pdf_coupled,
    transmission_pdf_zero_absorption,
};
use super::quad::{integrate_adaptive, Hints, QuadOptions};
use super::phase::{
    joint_ttheta_asymptotic, joint_ttheta_pdf, joint_ttheta_rician, phase_pdf, phase_pdf_strong, phase_pdf_weak,
    phase_pdf_zero_absorption, phase_rigidity_pdf, PhaseModel,
};
use crate::error::{Error, Result};
use crate::p0::{P0Kind, P0Model};
use crate::scales::ControlParams;

/// Every analytic density the toolkit can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    /// Lossless transmission.
    #[serde(rename = "p_t0")]
    TransmissionLossless,
    /// Exact transmission law with a pluggable `P0`.
    #[serde(rename = "p_t")]
    Transmission,
    #[serde(rename = "p_t_strong")]
    TransmissionStrong,
    /// Reflection `R_+` at direct reflection `r0`.
    #[serde(rename = "p_r")]
    Reflection,
    #[serde(rename = "p_theta0")]
    PhaseLossless,
    #[serde(rename = "p_theta")]
    Phase,
    #[serde(rename = "p_theta_weak")]
    PhaseWeak,
    #[serde(rename = "p_theta_strong")]
    PhaseStrong,
    #[serde(rename = "p_rho")]
    Rigidity,
    #[serde(rename = "p_rho0")]
    RigidityLossless,
    #[serde(rename = "joint_rt")]
    JointRt,
    #[serde(rename = "joint_ttheta")]
    JointTTheta,
    #[serde(rename = "joint_ttheta_asym")]
    JointTThetaAsymptotic,
    #[serde(rename = "joint_ttheta_rice")]
    JointTThetaRician,
    /// Mean amplitudes `<t>`, `<r±>` (no density).
    #[serde(rename = "means")]
    Means,
}

impl FormulaId {
    pub const ALL: [FormulaId; 15] = [
        FormulaId::TransmissionLossless,
        FormulaId::Transmission,
        FormulaId::TransmissionStrong,
        FormulaId::Reflection,
        FormulaId::PhaseLossless,
        FormulaId::Phase,
        FormulaId::PhaseWeak,
        FormulaId::PhaseStrong,
        FormulaId::Rigidity,
        FormulaId::RigidityLossless,
        FormulaId::JointRt,
        FormulaId::JointTTheta,
        FormulaId::JointTThetaAsymptotic,
        FormulaId::JointTThetaRician,
        FormulaId::Means,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::TransmissionLossless => "p_t0",
            FormulaId::Transmission => "p_t",
            FormulaId::TransmissionStrong => "p_t_strong",
            FormulaId::Reflection => "p_r",
            FormulaId::PhaseLossless => "p_theta0",
            FormulaId::Phase => "p_theta",
            FormulaId::PhaseWeak => "p_theta_weak",
            FormulaId::PhaseStrong => "p_theta_strong",
            FormulaId::Rigidity => "p_rho",
            FormulaId::RigidityLossless => "p_rho0",
            FormulaId::JointRt => "joint_rt",
            FormulaId::JointTTheta => "joint_ttheta",
            FormulaId::JointTThetaAsymptotic => "joint_ttheta_asym",
            FormulaId::JointTThetaRician => "joint_ttheta_rice",
            FormulaId::Means => "means",
        }
    }

    pub fn valid_names() -> String {
        FormulaId::ALL.iter().map(|f| f.name()).collect::<Vec<_>>().join(", ")
    }

    pub fn dims(self) -> usize {
        match self {
            FormulaId::JointRt
            | FormulaId::JointTTheta
            | FormulaId::JointTThetaAsymptotic
            | FormulaId::JointTThetaRician => 2,
            FormulaId::Means => 0,
            _ => 1,
        }
    }

    /// Whether the formula integrates a `P0` model.
    pub fn needs_p0(self) -> bool {
        matches!(
            self,
            FormulaId::Transmission
                | FormulaId::Reflection
                | FormulaId::Phase
                | FormulaId::Rigidity
                | FormulaId::JointRt
                | FormulaId::JointTTheta
        )
    }

    /// Formulas valid only at vanishing absorption.
    pub fn lossless(self) -> bool {
        matches!(
            self,
            FormulaId::TransmissionLossless | FormulaId::PhaseLossless | FormulaId::RigidityLossless
        )
    }

    /// Asymptotic approximations are never treated as exact references.
    pub fn asymptotic(self) -> bool {
        matches!(
            self,
            FormulaId::TransmissionStrong
                | FormulaId::PhaseWeak
                | FormulaId::PhaseStrong
                | FormulaId::JointTThetaAsymptotic
                | FormulaId::JointTThetaRician
        )
    }

    /// Requires `t0 = 1`.
    pub fn needs_perfect_coupling(self) -> bool {
        !matches!(
            self,
            FormulaId::TransmissionLossless | FormulaId::Transmission | FormulaId::Reflection | FormulaId::Means
        )
    }

    /// Axis names, first axis first.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            FormulaId::TransmissionLossless | FormulaId::Transmission | FormulaId::TransmissionStrong => &["T"],
            FormulaId::Reflection => &["R"],
            FormulaId::PhaseLossless | FormulaId::Phase | FormulaId::PhaseWeak | FormulaId::PhaseStrong => {
                &["theta"]
            }
            FormulaId::Rigidity | FormulaId::RigidityLossless => &["rho"],
            FormulaId::JointRt => &["R", "T"],
            FormulaId::JointTTheta | FormulaId::JointTThetaAsymptotic | FormulaId::JointTThetaRician => {
                &["T", "theta"]
            }
            FormulaId::Means => &[],
        }
    }

    /// Natural support of each axis.
    pub fn support(self) -> Vec<(f64, f64)> {
        use std::f64::consts::FRAC_PI_2;
        self.variables()
            .iter()
            .map(|v| match *v {
                "theta" => (-FRAC_PI_2, FRAC_PI_2),
                "rho" => (-1.0, 1.0),
                _ => (0.0, 1.0),
            })
            .collect()
    }
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown formula `{s}`; valid ids: {}", FormulaId::valid_names())))
    }
}

/// A formula bound to its parameters and (when needed) a `P0` model.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub formula: FormulaId,
    pub params: ControlParams,
    pub p0: Option<P0Model>,
}

impl Evaluator {
    /// Validates formula/parameter/P0 compatibility.
    pub fn new(formula: FormulaId, params: ControlParams, p0: Option<P0Model>) -> Result<Self> {
        Self::check(formula, &params)?;
        if formula.needs_p0() {
            let Some(model) = &p0 else {
                return Err(Error::Validation(format!("formula {formula} needs a P0 model (--p0)")));
            };
            if (model.gamma() - params.gamma).abs() > 1e-12 * params.gamma.max(1.0) {
                return Err(Error::Validation(format!(
                    "P0 model was built for gamma = {} but gamma = {} was requested",
                    model.gamma(),
                    params.gamma
                )));
            }
        }
        Ok(Self { formula, params, p0 })
    }

    /// Formula/parameter compatibility, independent of any `P0` model.
    pub fn check(formula: FormulaId, params: &ControlParams) -> Result<()> {
        params.validate()?;
        if formula == FormulaId::Means {
            return Err(Error::Validation("`means` has no density to evaluate".into()));
        }
        if formula.needs_p0() && params.gamma == 0.0 {
            let remedy = match formula {
                FormulaId::Transmission | FormulaId::JointRt => "use p_t0",
                FormulaId::Phase | FormulaId::JointTTheta => "use p_theta0",
                FormulaId::Rigidity => "use p_rho0",
                _ => "use a lossless formula",
            };
            return Err(Error::Validation(format!(
                "formula {formula} needs a P0 model, which does not exist at gamma = 0; {remedy}"
            )));
        }
        if !formula.needs_p0() && !formula.lossless() && params.gamma == 0.0 {
            return Err(Error::Validation(format!("formula {formula} needs gamma > 0")));
        }
        if formula.needs_perfect_coupling() && (params.t0 - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("formula {formula} requires perfect coupling (t0 = 1)")));
        }
        if (formula.needs_p0() || formula.lossless() || formula.asymptotic()) && !(params.eta > 0.0) {
            return Err(Error::Validation("eta must be > 0".into()));
        }
        Ok(())
    }

    fn model(&self) -> &P0Model {
        self.p0.as_ref().expect("validated in Evaluator::new")
    }

    pub fn p0_kind(&self) -> Option<P0Kind> {
        self.p0.as_ref().map(|m| m.kind())
    }

    /// One-dimensional density.
    pub fn density(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        let (eta, gamma) = (p.eta, p.gamma);
        let scale = p.t0 * p.t0;
        Ok(match self.formula {
            FormulaId::TransmissionLossless => transmission_pdf_zero_absorption(x / scale, eta) / scale,
            FormulaId::Transmission => transmission_pdf_coupled(x, eta, p.t0, self.model())?,
            FormulaId::TransmissionStrong => strong_absorption_transmission_pdf(x, eta, gamma),
            FormulaId::Reflection => reflection_pdf(x, eta, p.r0, self.model())?,
            FormulaId::PhaseLossless => phase_pdf_zero_absorption(x, eta),
            FormulaId::Phase => phase_pdf(x, eta, self.model())?,
            FormulaId::PhaseWeak => phase_pdf_weak(x, eta, gamma),
            FormulaId::PhaseStrong => phase_pdf_strong(x, eta, gamma),
            FormulaId::Rigidity => phase_rigidity_pdf(x, eta, PhaseModel::Exact(self.model()))?,
            FormulaId::RigidityLossless => phase_rigidity_pdf(x, eta, PhaseModel::ZeroAbsorption)?,
            other => {
                return Err(Error::Validation(format!("{other} is not a one-dimensional density")));
            }
        })
    }

    /// Two-dimensional density, axes in [`FormulaId::variables`] order.
    pub fn density2(&self, x: f64, y: f64) -> Result<f64> {
        let p = &self.params;
        Ok(match self.formula {
            FormulaId::JointRt => joint_rt_pdf(x, y, p.eta, self.model())?,
            FormulaId::JointTTheta => joint_ttheta_pdf(x, y, p.eta, self.model()),
            FormulaId::JointTThetaAsymptotic => joint_ttheta_asymptotic(x, y, p.eta, p.gamma),
            FormulaId::JointTThetaRician => joint_ttheta_rician(x, y, p.eta, p.gamma),
            other => {
                return Err(Error::Validation(format!("{other} is not a two-dimensional density")));
            }
        })
    }
}

impl Evaluator {
    /// Integral of a 1D density over its support by adaptive quadrature.
    pub fn normalization(&self) -> Result<f64> {
        let (lo, hi) = self.formula.support()[0];
        let err = std::cell::Cell::new(None);
        let f = |x: f64| {
            self.density(x).unwrap_or_else(|e| {
                err.set(Some(e));
                0.0
            })
        };
        let r = integrate_adaptive(f, lo, hi, Hints::BOTH_INV_SQRT, &QuadOptions::with_tol(1e-10, 1e-10));
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(r?.value)
    }
}

/// Uniform grid on one axis, `lo:hi:n` with `n` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo) || n < 2 {
            return Err(Error::Validation(format!("bad grid {lo}:{hi}:{n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + step * i as f64).collect()
    }
}

impl FromStr for AxisSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid `{s}` must look like lo:hi:n")));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| Error::Parse(format!("grid `{s}`: {e}")));
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("grid `{s}`: {e}")))?;
        AxisSpec::new(num(parts[0])?, num(parts[1])?, n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub formula_id: String,
    pub eta: f64,
    pub gamma: f64,
    pub t0: f64,
    pub r0: f64,
    pub p0_kind: Option<P0Kind>,
    pub asymptotic: bool,
    pub grid_spec: Vec<AxisSpec>,
}

/// Tabulated analytic density.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfGrid {
    pub variables: Vec<String>,
    pub axes: Vec<Vec<f64>>,
    /// Row-major: first axis slowest.
    pub densities: Vec<f64>,
    pub metadata: GridMetadata,
}

impl PdfGrid {
    fn metadata(ev: &Evaluator, spec: Vec<AxisSpec>) -> GridMetadata {
        GridMetadata {
            formula_id: ev.formula.name().to_string(),
            eta: ev.params.eta,
            gamma: ev.params.gamma,
            t0: ev.params.t0,
            r0: ev.params.r0,
            p0_kind: ev.p0_kind(),
            asymptotic: ev.formula.asymptotic(),
            grid_spec: spec,
        }
    }

    /// Tabulates a 1D formula; abscissae are evaluated in parallel.
    pub fn tabulate_1d(ev: &Evaluator, axis: AxisSpec) -> Result<Self> {
        if ev.formula.dims() != 1 {
            return Err(Error::Validation(format!("{} is not one-dimensional", ev.formula)));
        }
        let xs = axis.points();
        let densities = xs.par_iter().map(|&x| ev.density(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            variables: ev.formula.variables().iter().map(|s| s.to_string()).collect(),
            axes: vec![xs],
            densities,
            metadata: Self::metadata(ev, vec![axis]),
        })
    }

    pub fn tabulate_2d(ev: &Evaluator, x_axis: AxisSpec, y_axis: AxisSpec) -> Result<Self> {
        if ev.formula.dims() != 2 {
            return Err(Error::Validation(format!("{} is not two-dimensional", ev.formula)));
        }
        let xs = x_axis.points();
        let ys = y_axis.points();
        let densities = xs
            .par_iter()
            .map(|&x| ys.iter().map(|&y| ev.density2(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(Self {
            variables: ev.formula.variables().iter().map(|s| s.to_string()).collect(),
            axes: vec![xs, ys],
            densities,
            metadata: Self::metadata(ev, vec![x_axis, y_axis]),
        })
    }

    /// Trapezoid integral of a 1D grid (crude near edge singularities).
    pub fn trapezoid(&self) -> f64 {
        let xs = &self.axes[0];
        xs.windows(2)
            .zip(self.densities.windows(2))
            .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
            .sum()
    }
}
