//! Physical resonance parameters and their reduction to the dimensionless
//! control set `(eta, gamma, t0, r0)` used by every statistical routine.
//!
//! A single resonance at `epsilon0` with real channel amplitudes `A_c` has the
//! multichannel Breit-Wigner matrix
//!
//! ```text
//! S0_ab(E) = delta_ab - i A_a A_b / (E - epsilon0 + i Gamma0 / 2),   Gamma0 = sum_c A_c^2
//! ```
//!
//! Coupling to the background adds the spreading width to the damping of the
//! ensemble-averaged (optical) matrix.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self[(i, k)];
                for j in 0..self.n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Physical parameters of a resonance coupled to an absorbing background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSpec {
    pub epsilon0: f64,
    #[serde(rename = "amplitudes")]
    pub channel_amplitudes: Vec<f64>,
    /// Spreading width.
    pub gamma_spread: f64,
    /// Uniform absorption width of the background states.
    pub gamma_abs: f64,
    /// Mean level spacing of the background.
    pub level_spacing: f64,
}

impl ResonanceSpec {
    /// Total escape width, the sum of squared channel amplitudes.
    pub fn escape_width(&self) -> f64 {
        self.channel_amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn eta(&self) -> f64 {
        self.gamma_spread / self.escape_width()
    }

    pub fn gamma(&self) -> f64 {
        2.0 * PI * self.gamma_abs / self.level_spacing
    }

    pub fn validate(&self) -> Result<()> {
        if self.channel_amplitudes.len() < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least two channels, got {}",
                self.channel_amplitudes.len()
            )));
        }
        if self.channel_amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidSpec("non-finite channel amplitude".into()));
        }
        if !(self.escape_width() > 0.0) {
            return Err(Error::InvalidSpec(
                "escape width is zero: all channel amplitudes vanish".into(),
            ));
        }
        if !(self.gamma_spread >= 0.0) || !(self.gamma_abs >= 0.0) {
            return Err(Error::InvalidSpec("widths must be nonnegative".into()));
        }
        if !(self.level_spacing > 0.0) {
            return Err(Error::InvalidSpec("level spacing must be positive".into()));
        }
        Ok(())
    }
}

/// Dimensionless control parameters of the two-channel problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    /// Background coupling, ratio of spreading to escape width.
    pub eta: f64,
    /// Absorption rate `2 pi Gamma_abs / Delta`.
    pub gamma: f64,
    /// Direct transmission amplitude, `sin 2 phi`.
    pub t0: f64,
    /// Direct reflection amplitude in channel 1, `cos 2 phi`.
    pub r0: f64,
    /// Channel-mixing angle.
    pub phi: f64,
}

impl ControlParams {
    /// Perfect coupling: `t0 = 1`, `r0 = 0`.
    pub fn perfect(eta: f64, gamma: f64) -> Self {
        Self::from_phi(eta, gamma, PI / 4.0)
    }

    pub fn from_phi(eta: f64, gamma: f64, phi: f64) -> Self {
        Self {
            eta,
            gamma,
            t0: (2.0 * phi).sin(),
            r0: (2.0 * phi).cos(),
            phi,
        }
    }

    /// Builds the parameters from `t0 in [0, 1]`; `r0` takes the sign of
    /// `r0_sign` (channel relabelling flips it).
    pub fn from_t0(eta: f64, gamma: f64, t0: f64, r0_sign: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t0) {
            return Err(Error::Domain(format!("t0 = {t0} outside [0, 1]")));
        }
        let r0 = (1.0 - t0 * t0).max(0.0).sqrt().copysign(r0_sign);
        Ok(Self {
            eta,
            gamma,
            t0,
            r0,
            phi: 0.5 * r0.clamp(-1.0, 1.0).acos(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::Domain(format!("eta = {} must be >= 0", self.eta)));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::Domain(format!("gamma = {} must be >= 0", self.gamma)));
        }
        if (self.t0 * self.t0 + self.r0 * self.r0 - 1.0).abs() > 1e-9 || self.t0 < 0.0 {
            return Err(Error::Domain(format!(
                "t0 = {}, r0 = {} violate t0^2 + r0^2 = 1 with t0 >= 0",
                self.t0, self.r0
            )));
        }
        Ok(())
    }

    /// The same parameters with the channel labels exchanged (`r0 -> -r0`).
    pub fn swapped(&self) -> Self {
        Self::from_t0(self.eta, self.gamma, self.t0, -self.r0).unwrap_or(*self)
    }
}

fn resonance_matrix(e: f64, spec: &ResonanceSpec, damping: f64) -> Result<ComplexMatrix> {
    spec.validate()?;
    let amps = &spec.channel_amplitudes;
    let m = amps.len();
    let denom = Complex64::new(e - spec.epsilon0, 0.5 * damping);
    let mut s = ComplexMatrix::identity(m);
    if !denom.norm().is_finite() {
        return Ok(s);
    }
    let factor = -Complex64::i() / denom;
    for a in 0..m {
        for b in 0..m {
            s[(a, b)] += factor * amps[a] * amps[b];
        }
    }
    Ok(s)
}

/// Breit-Wigner scattering matrix of the clean resonance at energy `e`.
pub fn breit_wigner_s0(e: f64, spec: &ResonanceSpec) -> Result<ComplexMatrix> {
    resonance_matrix(e, spec, spec.escape_width())
}

/// Ensemble-averaged scattering matrix: the spreading width joins the escape
/// width in the resonance denominator.
pub fn optical_s(e: f64, spec: &ResonanceSpec) -> Result<ComplexMatrix> {
    resonance_matrix(e, spec, spec.escape_width() + spec.gamma_spread)
}

/// Reduces a two-channel resonance to `(eta, gamma, t0, r0, phi)`.
///
/// The off-diagonal sign of `S0` at resonance depends on the amplitude signs;
/// it is an unobservable channel phase, so `t0 = |sin 2 phi|` is always
/// nonnegative.
pub fn control_params(spec: &ResonanceSpec) -> Result<ControlParams> {
    spec.validate()?;
    let eta = spec.eta();
    let gamma = spec.gamma();
    if spec.channel_amplitudes.len() != 2 {
        return Err(Error::Unsupported(format!(
            "two-channel reduction needs exactly 2 channels, got {} (eta = {eta}, gamma = {gamma})",
            spec.channel_amplitudes.len()
        )));
    }
    let g0 = spec.escape_width();
    let (a1, a2) = (spec.channel_amplitudes[0], spec.channel_amplitudes[1]);
    let r0 = (a2 * a2 - a1 * a1) / g0;
    let t0 = 2.0 * (a1 * a2).abs() / g0;
    Ok(ControlParams {
        eta,
        gamma,
        t0,
        r0,
        phi: 0.5 * r0.clamp(-1.0, 1.0).acos(),
    })
}
