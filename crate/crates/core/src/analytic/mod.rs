//! Closed-form and quadrature-based distributions of the scattering observables.

pub mod grid;
pub mod intensity;
pub mod phase;
pub mod quad;

pub use grid::{AxisSpec, Evaluator, FormulaId, GridMetadata, PdfGrid};
pub use intensity::{
    joint_rt_pdf, reflection_pdf, strong_absorption_transmission_pdf, transmission_pdf, transmission_pdf_coupled,
    transmission_pdf_zero_absorption,
};
pub use phase::{
    gaussian_limit_params, joint_ttheta_asymptotic, joint_ttheta_pdf, joint_ttheta_rician, phase_pdf,
    phase_pdf_strong, phase_pdf_weak, phase_pdf_zero_absorption, phase_rigidity_pdf, GaussianLimitParams,
    PhaseModel,
};
