//! Empirical verification of the limit theorems.
//!
//! Path functionals and scaled terminal values ([`functionals`]), the KS test
//! ([`ks`]), martingale diagnostics ([`diagnostics`]), moments of the
//! superdiffusive limit ([`limit`]) and the named protocols run by the
//! acceptance suite and the command line ([`catalogue`]).

pub mod catalogue;
pub mod diagnostics;
pub mod functionals;
pub mod ks;
pub mod limit;
pub mod report;
pub mod stats;

pub use catalogue::{run_configured, run_protocol, CONFIGURED_TESTS, DEFAULT_SEED, PROTOCOLS};
pub use diagnostics::{martingale_diagnostics, BracketTracker, DiagnosticPoint};
pub use functionals::{
    lil_statistic, qsl_critical, qsl_diffusive, scale_terminal, scaled_terminal, RunningFunctionals, LIL_START,
};
pub use ks::{kolmogorov_survival, ks_statistic, Cdf, KsOutcome, NormalReference};
pub use limit::{compare_limit, empirical_moments, EmpiricalMoments, SampleContext};
pub use report::{all_hard_pass, Gate, Provenance, TestReport};
