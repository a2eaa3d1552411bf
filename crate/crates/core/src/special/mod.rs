//! Gamma ratios, the `₃F₂` series at unit argument, and the martingale weights.

pub mod gamma;
pub mod hyp;
pub mod weights;

pub use gamma::{gamma, ln_gamma, ln_gamma_diff, pochhammer_ratio};
pub use hyp::{hurwitz_zeta, hyp3f2_unit, Hyp3F2Terms};
pub use weights::{
    gamma_coefficient, gamma_ratio_sum, martingale_weight, v_asymptote, weight_variance, RegimeTag,
    VAsymptote, VScale, WeightPoint, WeightSequence, WeightTable,
};
