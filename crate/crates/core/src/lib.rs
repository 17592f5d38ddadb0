//! # resonance-stats
//!
//! Scattering statistics of a single resonance coupled to a chaotic, absorbing
//! background: GOE Monte Carlo for the local Green function, closed-form and
//! quadrature densities for transmission, reflection and phase, and a harness
//! that checks one against the other.
//!
//! The examples are the intended way in. Run any of them with
//!
//! ```bash
//! cargo run --release --example <name>
//! ```
//!
//! - **`breit_wigner`** - clean and ensemble-averaged S-matrix of the resonance
//! - **`sample_greens`** - draw `(u, v, x)` from the ensemble, check `<v> = 1`
//! - **`observables`** - S-matrix, flux deficit and phases for one sample
//! - **`p0_models`** - empirical, weak and strong `P0(x)`, saved and reloaded
//! - **`transmission_distribution`** - `P(T)` against Monte Carlo with a KS test
//! - **`phase_distribution`** - exact, weak and strong phase densities
//! - **`joint_distributions`** - `P(R, T)`, `P(T, theta)` and the Rician limit
//! - **`sampler_equivalence`** - tridiagonal vs dense sampler, two-sample KS
//! - **`compare_report`** - a full comparison run written to disk, plus a scan
//!
//! The `resonance-stats` binary wraps the same calls as `sample`, `eval`,
//! `compare`, `scan` and `calibrate` subcommands.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod observables;
pub mod p0;
pub mod rmt;
pub mod scales;
pub mod special;

pub use error::{Error, Result};
