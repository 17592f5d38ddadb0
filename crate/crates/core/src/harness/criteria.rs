//! Versioned pass thresholds for comparison reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::FormulaId;
use crate::error::{Error, Result};

const DEFAULT_CRITERIA: &str = include_str!("../../criteria/default.toml");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub ks_max: f64,
    /// 2D comparisons.
    pub l1_max: f64,
    pub normalization_tol: f64,
    /// Allowed distance of a sample mean from its target, in standard errors.
    pub moment_sigmas: f64,
    /// Finite-`N` gate on `<v>`.
    pub mean_v_tol: f64,
    /// Allowed relative deviation of variance ratios from 1 in scans.
    pub variance_ratio_tol: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdOverrides {
    pub ks_max: Option<f64>,
    pub l1_max: Option<f64>,
    pub normalization_tol: Option<f64>,
    pub moment_sigmas: Option<f64>,
    pub mean_v_tol: Option<f64>,
    pub variance_ratio_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criteria {
    pub version: u32,
    pub defaults: Thresholds,
    #[serde(default)]
    pub formula: BTreeMap<String, ThresholdOverrides>,
}

impl Default for Criteria {
    fn default() -> Self {
        Self::parse(DEFAULT_CRITERIA).expect("bundled criteria file parses")
    }
}

impl Criteria {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Criteria = toml::from_str(text).map_err(|e| Error::Parse(format!("criteria: {e}")))?;
        for name in c.formula.keys() {
            name.parse::<FormulaId>()?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| e.context(format!("loading {}", path.display())))
    }

    pub fn for_formula(&self, formula: FormulaId) -> Thresholds {
        let mut t = self.defaults;
        if let Some(o) = self.formula.get(formula.name()) {
            t.ks_max = o.ks_max.unwrap_or(t.ks_max);
            t.l1_max = o.l1_max.unwrap_or(t.l1_max);
            t.normalization_tol = o.normalization_tol.unwrap_or(t.normalization_tol);
            t.moment_sigmas = o.moment_sigmas.unwrap_or(t.moment_sigmas);
            t.mean_v_tol = o.mean_v_tol.unwrap_or(t.mean_v_tol);
            t.variance_ratio_tol = o.variance_ratio_tol.unwrap_or(t.variance_ratio_tol);
        }
        t
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CriterionResult {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}
