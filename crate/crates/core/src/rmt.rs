//! Chaotic background sampling.
//!
//! The background Hamiltonian is drawn from the Gaussian orthogonal ensemble
//! normalised so that the semicircle has radius 2 and the mean level spacing
//! at the band centre is `pi / N`. With that choice the local Green's function
//!
//! ```text
//! K = (N Delta / pi) [(eps0 - H + i Gamma_abs / 2)^-1]_11 = u - i v
//! ```
//!
//! needs no prefactor, and `Gamma_abs = gamma / (2 N)`. The resonance energy is
//! pinned to the band centre, `eps0 = 0`.
//!
//! Two samplers produce statistically identical `K`: a dense GOE matrix
//! (reference, `O(N^3)` per draw) and the Householder-equivalent tridiagonal
//! beta = 1 model (`O(N)` per draw, default).

use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples per seed block. Block `b` of a stream always uses ChaCha stream
/// `b` of the configured key, whatever the chunking.
pub const BLOCK_SIZE: usize = 256;

const MAX_RETRIES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    DenseGoe,
    #[default]
    TridiagonalBeta1,
}

impl std::fmt::Display for Sampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sampler::DenseGoe => "dense_goe",
            Sampler::TridiagonalBeta1 => "tridiagonal_beta1",
        })
    }
}

impl std::str::FromStr for Sampler {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense_goe" | "dense" => Ok(Sampler::DenseGoe),
            "tridiagonal_beta1" | "tridiagonal" => Ok(Sampler::TridiagonalBeta1),
            other => Err(Error::Parse(format!(
                "unknown sampler `{other}` (expected dense_goe or tridiagonal_beta1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_levels: usize,
    pub gamma: f64,
    pub sampler: Sampler,
    pub seed: u64,
    pub n_samples: usize,
}

impl EnsembleConfig {
    pub fn new(n_levels: usize, gamma: f64, seed: u64, n_samples: usize) -> Self {
        Self {
            n_levels,
            gamma,
            sampler: Sampler::default(),
            seed,
            n_samples,
        }
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_levels < 16 || !self.n_levels.is_multiple_of(2) {
            return Err(Error::InvalidEnsemble(format!(
                "n_levels = {} must be even and >= 16",
                self.n_levels
            )));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidEnsemble(format!(
                "gamma = {} must be finite and >= 0",
                self.gamma
            )));
        }
        if self.n_samples == 0 {
            return Err(Error::InvalidEnsemble("n_samples must be >= 1".into()));
        }
        Ok(())
    }

    pub fn n_blocks(&self) -> usize {
        self.n_samples.div_ceil(BLOCK_SIZE)
    }
}

/// One draw of the local Green's function `K = u - i v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensSample {
    pub u: f64,
    pub v: f64,
    /// `(u^2 + v^2 + 1) / (2 v)`; `+inf` when `v = 0`.
    pub x: f64,
}

impl GreensSample {
    pub fn new(u: f64, v: f64) -> Self {
        // -0.0 from a real resolvent is normalised to +0.0
        let v = if v == 0.0 { 0.0 } else { v };
        let x = if v > 0.0 {
            (u * u + v * v + 1.0) / (2.0 * v)
        } else {
            f64::INFINITY
        };
        Self { u, v, x }
    }

    pub fn from_k(k: Complex64) -> Self {
        Self::new(k.re, -k.im)
    }

    pub fn k(&self) -> Complex64 {
        Complex64::new(self.u, -self.v)
    }
}

/// Dense real symmetric matrix, full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds from the lower triangle, mirroring it to the upper one.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = f(i, j);
                data[i * n + j] = x;
                data[j * n + i] = x;
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[k]` couples levels `k` and `k + 1`.
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

/// Anything whose `(1,1)` resolvent element can be evaluated.
pub trait Background {
    fn dim(&self) -> usize;

    /// `[(z - H)^-1]_11`.
    fn resolvent_11(&self, z: Complex64) -> Result<Complex64>;
}

impl Background for SymmetricMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    /// Eliminates levels `N..2` onto the first one (Gaussian elimination of
    /// `z - H` without pivoting, lower triangle only). For `Im z > 0` every
    /// pivot has imaginary part at least `Im z`, so no pivoting is needed.
    fn resolvent_11(&self, z: Complex64) -> Result<Complex64> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidEnsemble("empty matrix".into()));
        }
        // packed lower triangle of z - H
        let start = |i: usize| i * (i + 1) / 2;
        let mut a = vec![Complex64::new(0.0, 0.0); start(n)];
        for i in 0..n {
            for j in 0..=i {
                let h = self.data[i * n + j];
                a[start(i) + j] = if i == j { z - h } else { Complex64::new(-h, 0.0) };
            }
        }
        for k in (1..n).rev() {
            let (head, tail) = a.split_at_mut(start(k));
            let row_k = &tail[..=k];
            let pivot = row_k[k];
            if pivot.norm_sqr() == 0.0 {
                return Err(Error::SingularResolvent);
            }
            let inv = pivot.inv();
            for i in 0..k {
                let l = row_k[i] * inv;
                if l.re == 0.0 && l.im == 0.0 {
                    continue;
                }
                let row_i = &mut head[start(i)..start(i) + i + 1];
                for (aij, &akj) in row_i.iter_mut().zip(&row_k[..=i]) {
                    *aij -= l * akj;
                }
            }
        }
        let a00 = a[0];
        if a00.norm_sqr() == 0.0 {
            return Err(Error::SingularResolvent);
        }
        Ok(a00.inv())
    }
}

impl Background for Tridiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Bottom-up continued fraction
    /// `g_k = 1 / (z - d_k - e_k^2 g_{k+1})`, returning `g_1`.
    fn resolvent_11(&self, z: Complex64) -> Result<Complex64> {
        let n = self.diag.len();
        if n == 0 {
            return Err(Error::InvalidEnsemble("empty matrix".into()));
        }
        let mut g = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            let coupling = if k + 1 < n { self.off[k] * self.off[k] } else { 0.0 };
            let denom = z - self.diag[k] - g * coupling;
            if denom.norm_sqr() == 0.0 {
                return Err(Error::SingularResolvent);
            }
            g = denom.inv();
        }
        Ok(g)
    }
}

/// Draws a GOE matrix with off-diagonal variance `1/N` and diagonal variance `2/N`.
pub fn sample_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymmetricMatrix {
    let off = (1.0 / n as f64).sqrt();
    let diag = (2.0 / n as f64).sqrt();
    SymmetricMatrix::from_fn(n, |i, j| {
        let z: f64 = rng.sample(StandardNormal);
        if i == j {
            z * diag
        } else {
            z * off
        }
    })
}

/// Reusable tridiagonal sampler holding the chi-squared laws of each row.
#[derive(Debug, Clone)]
pub struct TridiagonalSampler {
    n: usize,
    chi2: Vec<ChiSquared<f64>>,
}

impl TridiagonalSampler {
    pub fn new(n: usize) -> Self {
        let chi2 = (1..n)
            .map(|k| ChiSquared::new((n - k) as f64).expect("positive degrees of freedom"))
            .collect();
        Self { n, chi2 }
    }

    /// Fills `out` with a fresh draw: diagonal `N(0, 2/N)`, `k`-th
    /// off-diagonal `chi_{N-k} / sqrt(N)`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Tridiagonal) {
        let n = self.n as f64;
        let diag_scale = (2.0 / n).sqrt();
        out.diag.clear();
        out.off.clear();
        out.diag
            .extend((0..self.n).map(|_| diag_scale * rng.sample::<f64, _>(StandardNormal)));
        out.off
            .extend(self.chi2.iter().map(|chi2| (chi2.sample(rng) / n).sqrt()));
    }
}

/// Draws the tridiagonal beta = 1 matrix whose spectral measure at the first
/// basis vector has the GOE law.
pub fn sample_tridiagonal_beta1<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tridiagonal {
    let mut out = Tridiagonal::default();
    TridiagonalSampler::new(n).sample_into(rng, &mut out);
    out
}

/// Absorption width of each background level for rate `gamma` and `N` levels.
pub fn absorption_width(gamma: f64, n: usize) -> f64 {
    gamma / (2.0 * n as f64)
}

/// Local Green's function at the band centre with uniform absorption.
pub fn local_green<H: Background + ?Sized>(h: &H, gamma: f64, n: usize) -> Result<GreensSample> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma = {gamma} must be >= 0")));
    }
    let z = Complex64::new(0.0, 0.5 * absorption_width(gamma, n));
    // N Delta / pi = 1 with Delta = pi / N
    let k = h.resolvent_11(z)?;
    Ok(GreensSample::from_k(k))
}

fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

fn sample_block(config: &EnsembleConfig, block: usize, tri: Option<&TridiagonalSampler>) -> Vec<GreensSample> {
    let lo = block * BLOCK_SIZE;
    let hi = (lo + BLOCK_SIZE).min(config.n_samples);
    let mut rng = block_rng(config.seed, block);
    let mut buf = Tridiagonal::default();
    let n = config.n_levels;
    let mut out = Vec::with_capacity(hi.saturating_sub(lo));
    for _ in lo..hi {
        let mut retries = 0;
        loop {
            let draw = match (config.sampler, tri) {
                (Sampler::TridiagonalBeta1, Some(tri)) => {
                    tri.sample_into(&mut rng, &mut buf);
                    local_green(&buf, config.gamma, n)
                }
                (Sampler::TridiagonalBeta1, None) => {
                    local_green(&sample_tridiagonal_beta1(n, &mut rng), config.gamma, n)
                }
                (Sampler::DenseGoe, _) => local_green(&sample_goe(n, &mut rng), config.gamma, n),
            };
            match draw {
                Ok(s) => {
                    out.push(s);
                    break;
                }
                // probability-zero event: redraw
                Err(Error::SingularResolvent) if retries < MAX_RETRIES => retries += 1,
                Err(e) => panic!("sampler failed after {retries} retries: {e}"),
            }
        }
    }
    out
}

/// Samples the blocks in `blocks`, in block order.
pub fn sample_blocks(config: &EnsembleConfig, blocks: Range<usize>) -> Result<Vec<GreensSample>> {
    config.validate()?;
    let blocks = blocks.start.min(config.n_blocks())..blocks.end.min(config.n_blocks());
    let tri = (config.sampler == Sampler::TridiagonalBeta1)
        .then(|| TridiagonalSampler::new(config.n_levels));
    let chunks: Vec<Vec<GreensSample>> = blocks
        .into_par_iter()
        .map(|b| sample_block(config, b, tri.as_ref()))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Full deterministic sample stream for `config`.
pub fn sample_stream(config: &EnsembleConfig) -> Result<Vec<GreensSample>> {
    sample_blocks(config, 0..config.n_blocks())
}

/// Splits the block range into `n_chunks` contiguous ranges; sampling each
/// range independently and concatenating reproduces [`sample_stream`].
pub fn chunk_ranges(config: &EnsembleConfig, n_chunks: usize) -> Vec<Range<usize>> {
    let total = config.n_blocks();
    let n_chunks = n_chunks.max(1);
    (0..n_chunks)
        .map(|c| (c * total / n_chunks)..((c + 1) * total / n_chunks))
        .collect()
}
