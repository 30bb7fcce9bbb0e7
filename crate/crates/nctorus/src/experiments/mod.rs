//! Experiments wiring the core modules together. Each returns a report
//! whose checks decide the process exit code.

mod checks;
mod scan;
mod suite;

use serde::Serialize;

pub use checks::{
    run_factorization_check, run_potential_decay, run_schwartz_bound, BoundRecord, BoundReport,
    DecayRecord, DecayReport, FactorRecord, FactorReport,
};
pub use scan::{
    run_theorem_scan, Regime, ScanRecord, ScanReport, Stabilization, STABILIZATION_TOLERANCE,
};
pub use suite::{run_property_suite, run_property_suite_with, CocycleFault, SuiteReport};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `max_error ≤ tolerance`; NaN fails.
    pub fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Size of the bounded worker pool: `NCTORUS_THREADS` if set to a positive
/// integer, otherwise rayon's default.
pub fn worker_threads() -> usize {
    std::env::var("NCTORUS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0)
}

pub(crate) fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads())
        .build()
        .expect("thread pool")
}

/// `|a - b| / |b|`, or `|a - b|` when `b = 0`.
pub(crate) fn relative(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if b == 0.0 {
        d
    } else {
        d / b.abs()
    }
}
