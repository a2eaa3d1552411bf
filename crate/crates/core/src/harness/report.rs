//! Uniform record for every verification statistic.

use serde::{Deserialize, Serialize};

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Closed form, recursion or exact enumeration.
    Analytic,
    /// Monte Carlo estimate.
    Empirical,
}

/// Whether a failing report fails the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    Hard,
    Monitored,
}

/// One compared statistic. `pass` is fixed at construction as
/// `|observed - expected| <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    /// Zero when the observed value is exact.
    pub standard_error: f64,
    pub pass: bool,
    pub sample_size: u64,
    pub horizon: u64,
    pub seed: u64,
    pub observed_provenance: Provenance,
    pub expected_provenance: Provenance,
    pub gate: Gate,
}

impl TestReport {
    /// An exact (analytic vs analytic) hard-gated comparison.
    pub fn new(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        TestReport {
            name: name.into(),
            observed,
            expected,
            tolerance,
            standard_error: 0.0,
            pass: within(observed, expected, tolerance),
            sample_size: 0,
            horizon: 0,
            seed: 0,
            observed_provenance: Provenance::Analytic,
            expected_provenance: Provenance::Analytic,
            gate: Gate::Hard,
        }
    }

    /// Marks the observed value as a Monte Carlo estimate over `sample_size` paths.
    pub fn empirical(mut self, sample_size: u64, horizon: u64, seed: u64) -> Self {
        self.observed_provenance = Provenance::Empirical;
        self.sample_size = sample_size;
        self.horizon = horizon;
        self.seed = seed;
        self
    }

    pub fn with_standard_error(mut self, se: f64) -> Self {
        self.standard_error = se;
        self
    }

    pub fn with_expected_provenance(mut self, provenance: Provenance) -> Self {
        self.expected_provenance = provenance;
        self
    }

    pub fn monitored(mut self) -> Self {
        self.gate = Gate::Monitored;
        self
    }

    pub fn is_hard(&self) -> bool {
        self.gate == Gate::Hard
    }

    /// True when the stored verdict agrees with the stored numbers.
    pub fn is_consistent(&self) -> bool {
        self.pass == within(self.observed, self.expected, self.tolerance)
    }
}

fn within(observed: f64, expected: f64, tolerance: f64) -> bool {
    (observed - expected).abs() <= tolerance
}

/// True when every hard-gated report passes.
pub fn all_hard_pass(reports: &[TestReport]) -> bool {
    reports.iter().filter(|r| r.is_hard()).all(|r| r.pass)
}
