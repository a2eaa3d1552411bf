//! Simulation and verification toolkit for the one-dimensional elephant random walk.
//!
//! - [`walk`]: exact samplers (sufficient-statistic and full-history) and ensembles.
//! - [`special`]: gamma ratios, `₃F₂` at unit argument, martingale weights.
//! - [`moments`]: exact finite-`n` moments, moments of the superdiffusive limit,
//!   and the exact-enumeration oracle.
//! - [`harness`]: limit-theorem functionals, Kolmogorov–Smirnov tests, martingale
//!   diagnostics and the verification catalogue.

pub mod error;
pub mod harness;
pub mod moments;
pub mod rng;
pub mod special;
pub mod walk;

pub use error::{ErwError, Result};
pub use moments::{
    classify_regime, closed_form_moment, conditional_eps_moments, enumerate_distribution, exact_moments,
    limit_moments, LimitMoments, MomentVector, Pmf,
};
pub use special::{RegimeTag, WeightTable};
pub use walk::{simulate, simulate_ensemble, Trajectory, WalkParams, WalkState};
