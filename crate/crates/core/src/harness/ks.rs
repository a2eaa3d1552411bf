//! One-sample Kolmogorov–Smirnov test.

use statrs::function::erf::erfc;

use crate::error::{domain, Result};

/// A continuous reference distribution.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Zero-mean normal law with the given variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalReference {
    pub variance: f64,
}

impl NormalReference {
    pub fn new(variance: f64) -> Result<Self> {
        if !(variance > 0.0) || !variance.is_finite() {
            return domain(format!("normal reference needs a positive variance, got {variance}"));
        }
        Ok(NormalReference { variance })
    }

    pub fn standard() -> Self {
        NormalReference { variance: 1.0 }
    }
}

impl Cdf for NormalReference {
    fn cdf(&self, x: f64) -> f64 {
        0.5 * erfc(-x / (2.0 * self.variance).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    /// `sup_x |F_N(x) - F(x)|`
    pub d: f64,
    /// Asymptotic `P(√N D_N > observed)`.
    pub p_value: f64,
    pub n: usize,
}

/// KS distance of `samples` from `reference` with the asymptotic p-value.
pub fn ks_statistic<C: Cdf + ?Sized>(samples: &[f64], reference: &C) -> Result<KsOutcome> {
    if samples.is_empty() {
        return domain("KS statistic needs at least one sample");
    }
    if samples.iter().any(|x| x.is_nan()) {
        return domain("KS statistic received a NaN sample");
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = reference.cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let d = d.clamp(0.0, 1.0);
    Ok(KsOutcome {
        d,
        p_value: kolmogorov_survival(nf.sqrt() * d),
        n,
    })
}

/// `P(K > λ)` for the Kolmogorov distribution.
///
/// Uses `2 Σ_{k=1}^{100} (-1)^{k-1} e^{-2k²λ²}` for `λ >= 1` and the Jacobi
/// theta form `1 - √(2π)/λ Σ_k e^{-(2k-1)²π²/(8λ²)}` below, where the
/// alternating series converges slowly.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda.is_nan() {
        return f64::NAN;
    }
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda >= 1.0 {
        let mut acc = 0.0;
        for k in (1..=100u32).rev() {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            acc += if k % 2 == 1 { term } else { -term };
        }
        2.0 * acc
    } else {
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut acc = 0.0;
        for k in 1..=100u32 {
            let m = (2 * k - 1) as f64;
            let term = (-m * m * c).exp();
            acc += term;
            if term < 1e-300 {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * acc
    };
    p.clamp(0.0, 1.0)
}
