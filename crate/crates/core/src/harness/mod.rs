//! Statistical comparison of Monte Carlo samples with the analytic laws.

pub mod compare;
pub mod criteria;
pub mod stats;

pub use compare::{
    calibrate_p0, compare, compare_samples, derive_seed, scan, CellSummary, CompareConfig, CompareOutput,
    ComparisonReport, HistogramData, P0Source, ScanConfig, ScanReport, TOOLKIT_VERSION,
};
pub use criteria::{Criteria, CriterionResult, Thresholds};
pub use stats::{
    ks_critical, ks_critical_two_sample, ks_distance, ks_two_sample, Binning, Histogram, Histogram2d, SampleSummary,
    TabulatedCdf,
};
