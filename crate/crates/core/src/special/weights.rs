//! Martingale normalizers `γ_n`, `a_n`, `v_n` and their regime asymptotics.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::gamma::{gamma, ln_gamma, ln_gamma_diff};
use super::hyp::hyp3f2_unit;
use crate::error::{domain, ErwError, Result};
use crate::walk::check_probability;

/// Diffusive (`p < 3/4`), critical (`p = 3/4`) or superdiffusive (`p > 3/4`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeTag {
    Diffusive,
    Critical,
    Superdiffusive,
}

impl RegimeTag {
    /// Exact comparison against 3/4, which is representable in binary.
    pub fn of(p: f64) -> RegimeTag {
        if p < 0.75 {
            RegimeTag::Diffusive
        } else if p == 0.75 {
            RegimeTag::Critical
        } else {
            RegimeTag::Superdiffusive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::Diffusive => "diffusive",
            RegimeTag::Critical => "critical",
            RegimeTag::Superdiffusive => "superdiffusive",
        }
    }
}

impl std::fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `γ_n = (n + 2p - 1) / n`, so that `E[S_{n+1} | F_n] = γ_n S_n`.
pub fn gamma_coefficient(n: u64, p: f64) -> f64 {
    assert!(n >= 1, "gamma_coefficient is defined for n >= 1");
    let n = n as f64;
    (n + 2.0 * p - 1.0) / n
}

fn check_weight_domain(n: u64, p: f64) -> Result<()> {
    check_probability("memory p", p)?;
    if n == 0 {
        return domain("weights are indexed from n = 1");
    }
    if p == 0.0 {
        return domain("martingale weights are undefined at p = 0 (Γ(2p) pole); simulate only");
    }
    Ok(())
}

/// `a_n = Γ(n) Γ(2p) / Γ(n + 2p - 1)`, evaluated in log space.
pub fn martingale_weight(n: u64, p: f64) -> Result<f64> {
    check_weight_domain(n, p)?;
    if n == 1 {
        return Ok(1.0);
    }
    Ok((ln_gamma(2.0 * p) - ln_gamma_diff(n as f64, 2.0 * p - 1.0)).exp())
}

/// `v_n = Σ_{k<=n} a_k²`.
pub fn weight_variance(n: u64, p: f64) -> Result<f64> {
    check_weight_domain(n, p)?;
    Ok(WeightSequence::new(p)?
        .nth(n as usize - 1)
        .expect("weight sequence is infinite")
        .v)
}

/// One entry of the weight recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPoint {
    pub k: u64,
    /// `γ_k`
    pub gamma: f64,
    /// `a_k`
    pub a: f64,
    /// `v_k`
    pub v: f64,
}

/// Streams `(γ_k, a_k, v_k)` for `k = 1, 2, ...` through the multiplicative
/// recursion `a_{k+1} = a_k / γ_k`.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    p: f64,
    k: u64,
    a: f64,
    v: f64,
}

impl WeightSequence {
    pub fn new(p: f64) -> Result<Self> {
        check_weight_domain(1, p)?;
        Ok(WeightSequence {
            p,
            k: 0,
            a: 1.0,
            v: 0.0,
        })
    }
}

impl Iterator for WeightSequence {
    type Item = WeightPoint;

    fn next(&mut self) -> Option<WeightPoint> {
        if self.k > 0 {
            self.a /= gamma_coefficient(self.k, self.p);
        }
        self.k += 1;
        self.v += self.a * self.a;
        Some(WeightPoint {
            k: self.k,
            gamma: gamma_coefficient(self.k, self.p),
            a: self.a,
            v: self.v,
        })
    }
}

/// Immutable tables of `γ_1..γ_{n-1}`, `a_1..a_n`, `v_1..v_n` for one `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    p: f64,
    gamma_seq: Vec<f64>,
    a_seq: Vec<f64>,
    v_seq: Vec<f64>,
}

impl WeightTable {
    pub fn new(p: f64, horizon: u64) -> Result<Self> {
        check_weight_domain(horizon, p)?;
        let len = horizon as usize;
        let mut gamma_seq = Vec::with_capacity(len.saturating_sub(1));
        let mut a_seq = Vec::with_capacity(len);
        let mut v_seq = Vec::with_capacity(len);
        for pt in WeightSequence::new(p)?.take(len) {
            if pt.k < horizon {
                gamma_seq.push(pt.gamma);
            }
            a_seq.push(pt.a);
            v_seq.push(pt.v);
        }
        Ok(WeightTable {
            p,
            gamma_seq,
            a_seq,
            v_seq,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn horizon(&self) -> u64 {
        self.a_seq.len() as u64
    }

    /// `γ_k` for `k = 1..horizon-1` (index `k - 1`).
    pub fn gammas(&self) -> &[f64] {
        &self.gamma_seq
    }

    /// `a_k` at index `k - 1`.
    pub fn weights(&self) -> &[f64] {
        &self.a_seq
    }

    /// `v_k` at index `k - 1`.
    pub fn variances(&self) -> &[f64] {
        &self.v_seq
    }

    /// `a_k` for `1 <= k <= horizon`.
    pub fn a(&self, k: u64) -> f64 {
        self.a_seq[k as usize - 1]
    }

    /// `v_k` for `1 <= k <= horizon`.
    pub fn v(&self, k: u64) -> f64 {
        self.v_seq[k as usize - 1]
    }
}

/// Growth of `v_n` in each regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VScale {
    /// `v_n ~ constant · n^exponent`
    Power { exponent: f64 },
    /// `v_n ~ constant · log n`
    Log,
    /// `v_n → constant`
    Finite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VAsymptote {
    pub regime: RegimeTag,
    pub scale: VScale,
    pub constant: f64,
}

/// Limit of `v_n` under its regime scaling: `Γ(2p)²/(3-4p)` against `n^{3-4p}`,
/// `π/4` against `log n`, or the finite limit `₃F₂(1,1,1; 2p,2p; 1)`.
pub fn v_asymptote(p: f64) -> Result<VAsymptote> {
    check_weight_domain(1, p)?;
    let regime = RegimeTag::of(p);
    Ok(match regime {
        RegimeTag::Diffusive => {
            let g = gamma(2.0 * p);
            VAsymptote {
                regime,
                scale: VScale::Power {
                    exponent: 3.0 - 4.0 * p,
                },
                constant: g * g / (3.0 - 4.0 * p),
            }
        }
        RegimeTag::Critical => VAsymptote {
            regime,
            scale: VScale::Log,
            constant: PI / 4.0,
        },
        RegimeTag::Superdiffusive => VAsymptote {
            regime,
            scale: VScale::Finite,
            constant: hyp3f2_unit(1.0, 1.0, 1.0, 2.0 * p, 2.0 * p)?,
        },
    })
}

/// `Σ_{k=1}^n Γ(k + a) / Γ(k + b)` for `a, b >= 0`, `b != a + 1`, through the
/// closed form
/// `[Γ(a+1)/Γ(b) - Γ(n+a+1)/Γ(n+b)] / (b - a - 1)`.
pub fn gamma_ratio_sum(a: f64, b: f64, n: u64) -> Result<f64> {
    if !(a >= 0.0) || !(b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(ErwError::Domain(format!(
            "gamma ratio sum needs finite a, b >= 0 (a = {a}, b = {b})"
        )));
    }
    if n == 0 {
        return domain("gamma ratio sum needs n >= 1");
    }
    let gap = b - a - 1.0;
    if gap.abs() < 1e-12 {
        return domain("gamma ratio sum closed form is singular at b = a + 1");
    }
    let shift = a + 1.0 - b;
    let head = if b == 0.0 { 0.0 } else { ln_gamma_diff(b, shift).exp() };
    let tail = ln_gamma_diff(n as f64 + b, shift).exp();
    Ok((head - tail) / gap)
}
