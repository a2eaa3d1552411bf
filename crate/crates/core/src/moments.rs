//! Exact moments of `S_n` and of the superdiffusive limit `L`.
//!
//! The linear recursions for `E[S_n^k]`, `k <= 4`, are the canonical route:
//! they are free of singular denominators for every `p ∈ [0, 1]`. The closed
//! forms have removable singularities at `p ∈ {1/2, 5/8, 3/4}` and serve as
//! cross-checks away from them. Throughout, `α = 2p - 1` and `β = 2q - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, ErwError, Result};
use crate::special::{gamma, pochhammer_ratio};
use crate::walk::{check_probability, step_probability};

pub use crate::special::RegimeTag;

/// Half-width of the exclusion window around singular closed-form denominators.
pub const SINGULARITY_EPS: f64 = 1e-6;

/// `E[S_n]`, `E[S_n²]`, `E[S_n³]`, `E[S_n⁴]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub n: u64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl MomentVector {
    /// Raw moment of order `k ∈ 1..=4`.
    pub fn order(&self, k: u8) -> f64 {
        match k {
            1 => self.m1,
            2 => self.m2,
            3 => self.m3,
            4 => self.m4,
            _ => panic!("moment order {k} is outside 1..=4"),
        }
    }

    /// Nonnegative variance, fourth-moment Cauchy–Schwarz and the `|S_n| <= n`
    /// bounds, each up to a relative slack `rel`.
    pub fn is_consistent(&self, rel: f64) -> bool {
        let n = self.n as f64;
        let slack = |x: f64| rel * x.abs().max(1.0);
        self.m2 + slack(self.m2) >= self.m1 * self.m1
            && self.m4 + slack(self.m4) >= self.m2 * self.m2
            && self.m1.abs() <= n + slack(n)
            && self.m2 <= n * n + slack(n * n)
            && self.m4 <= n.powi(4) + slack(n.powi(4))
    }
}

/// Streams the moment vectors for `n = 1, 2, ...` through the joint recursion
///
/// ```text
/// E[S_{n+1}]   = (1 + α/n) E[S_n]
/// E[S_{n+1}²]  = 1 + (1 + 2α/n) E[S_n²]
/// E[S_{n+1}³]  = (3 + α/n) E[S_n] + (1 + 3α/n) E[S_n³]
/// E[S_{n+1}⁴]  = 1 + 2(3 + 2α/n) E[S_n²] + (1 + 4α/n) E[S_n⁴]
/// ```
#[derive(Debug, Clone)]
pub struct MomentRecursion {
    alpha: f64,
    next: MomentVector,
}

impl MomentRecursion {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        check_probability("memory p", p)?;
        check_probability("first-step q", q)?;
        let beta = 2.0 * q - 1.0;
        Ok(MomentRecursion {
            alpha: 2.0 * p - 1.0,
            next: MomentVector {
                n: 1,
                m1: beta,
                m2: 1.0,
                m3: beta,
                m4: 1.0,
            },
        })
    }
}

impl Iterator for MomentRecursion {
    type Item = MomentVector;

    fn next(&mut self) -> Option<MomentVector> {
        let cur = self.next;
        let n = cur.n as f64;
        // Drift terms are divided by n last so integer-valued moments
        // (p = 1, q ∈ {0, 1}) stay exact.
        let a = self.alpha;
        self.next = MomentVector {
            n: cur.n + 1,
            m1: cur.m1 + a * cur.m1 / n,
            m2: 1.0 + cur.m2 + 2.0 * a * cur.m2 / n,
            m3: 3.0 * cur.m1 + cur.m3 + a * (cur.m1 + 3.0 * cur.m3) / n,
            m4: 1.0 + 6.0 * cur.m2 + cur.m4 + 4.0 * a * (cur.m2 + cur.m4) / n,
        };
        Some(cur)
    }
}

/// Exact `E[S_n^k]`, `k = 1..4`, by recursion in `O(n)`.
pub fn exact_moments(n: u64, p: f64, q: f64) -> Result<MomentVector> {
    if n == 0 {
        return Err(ErwError::InvalidParams("moments are defined for n >= 1".into()));
    }
    Ok(MomentRecursion::new(p, q)?
        .nth(n as usize - 1)
        .expect("moment recursion is infinite"))
}

fn near(x: f64) -> bool {
    x.abs() <= SINGULARITY_EPS
}

/// Closed-form `E[S_n^k]` for `k ∈ 1..=4`.
///
/// Singular parameter values (`p = 0` for `k = 1`; `p = 3/4` for `k >= 2`;
/// additionally `p = 1/2` for `k = 3` and `p = 5/8` for `k = 4`, each with a
/// window of [`SINGULARITY_EPS`]) are reported as domain errors; use
/// [`exact_moments`] there.
pub fn closed_form_moment(k: u8, n: u64, p: f64, q: f64) -> Result<f64> {
    check_probability("memory p", p)?;
    check_probability("first-step q", q)?;
    if n == 0 {
        return domain("moments are defined for n >= 1");
    }
    let alpha = 2.0 * p - 1.0;
    let beta = 2.0 * q - 1.0;
    let nf = n as f64;
    let singular = |what: &str| {
        Err(ErwError::Domain(format!(
            "closed form for E[S_n^{k}] is singular at p = {p} ({what}); use the recursion"
        )))
    };
    match k {
        1 => {
            if p == 0.0 {
                return singular("Γ(2p) pole");
            }
            // β Γ(n+α) / (Γ(n) Γ(α+1))
            Ok(beta * pochhammer_ratio(alpha + 1.0, 1.0, n - 1))
        }
        2 => {
            if near(p - 0.75) {
                return singular("2α - 1 = 0");
            }
            // n/(2α-1) (Γ(n+2α)/(Γ(n+1)Γ(2α)) - 1)
            Ok(nf / (2.0 * alpha - 1.0) * (pochhammer_ratio(2.0 * alpha, 1.0, n) - 1.0))
        }
        3 => {
            if near(p - 0.75) {
                return singular("2α - 1 = 0");
            }
            if near(p - 0.5) {
                return singular("α = 0");
            }
            let r3 = pochhammer_ratio(3.0 * alpha + 1.0, 1.0, n - 1);
            let r1 = pochhammer_ratio(alpha + 1.0, 1.0, n - 1);
            Ok(beta / (2.0 * alpha - 1.0) * (3.0 * (alpha + 1.0) * r3 - (3.0 * nf + alpha + 1.0) * r1))
        }
        4 => {
            if near(p - 0.75) {
                return singular("2α - 1 = 0");
            }
            if near(p - 0.625) {
                return singular("4α - 1 = 0");
            }
            let d2 = 2.0 * alpha - 1.0;
            let d4 = 4.0 * alpha - 1.0;
            let lead = 24.0 * alpha * (2.0 * alpha * (alpha + 1.0) - 1.0) / (d2 * d2 * d4);
            let r4 = pochhammer_ratio(4.0 * alpha + 1.0, 1.0, n - 1);
            let p2 = pochhammer_ratio(2.0 * alpha, 1.0, n);
            // ζ_n / Γ(n) of the quartic closed form
            let zeta = 2.0 * nf * (3.0 * nf + 2.0 * alpha + 2.0) * p2
                - nf * (3.0 * nf * d4 + 2.0 * (2.0 * alpha * alpha + 1.0)) / d4;
            Ok(lead * r4 - zeta / (d2 * d2))
        }
        _ => domain(format!("moment order {k} is outside 1..=4")),
    }
}

/// First four moments of `L = lim S_n / n^{2p-1}` and derived shape statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitMoments {
    pub p: f64,
    pub q: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub mu: f64,
    pub sigma2: f64,
    /// `None` when `L` is degenerate (`p = 1`, `q ∈ {0, 1}`).
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

impl LimitMoments {
    pub fn raw(&self, k: u8) -> f64 {
        match k {
            1 => self.e1,
            2 => self.e2,
            3 => self.e3,
            4 => self.e4,
            _ => panic!("limit moment order {k} is outside 1..=4"),
        }
    }
}

/// Moments of the superdiffusive limit `L` (requires `p > 3/4`).
pub fn limit_moments(p: f64, q: f64) -> Result<LimitMoments> {
    check_probability("memory p", p)?;
    check_probability("first-step q", q)?;
    if !(p > 0.75) {
        return domain(format!(
            "the limit L exists only in the superdiffusive regime p > 3/4 (p = {p})"
        ));
    }
    let alpha = 2.0 * p - 1.0;
    let beta = 2.0 * q - 1.0;
    let e1 = beta / gamma(2.0 * p);
    let e2 = 1.0 / ((4.0 * p - 3.0) * gamma(2.0 * alpha));
    let e3 = 2.0 * p * beta / (alpha * (4.0 * p - 3.0) * gamma(3.0 * alpha));
    let e4 = 6.0 * (8.0 * p * p - 4.0 * p - 1.0)
        / ((8.0 * p - 5.0) * (4.0 * p - 3.0).powi(2) * gamma(4.0 * alpha));

    let (skewness, kurtosis, sigma2) = shape_from_raw(e1, e2, e3, e4);
    Ok(LimitMoments {
        p,
        q,
        e1,
        e2,
        e3,
        e4,
        mu: e1,
        sigma2,
        skewness,
        kurtosis,
    })
}

/// Variance, skewness and kurtosis from the first four raw moments.
pub(crate) fn shape_from_raw(e1: f64, e2: f64, e3: f64, e4: f64) -> (Option<f64>, Option<f64>, f64) {
    let var = e2 - e1 * e1;
    let c3 = e3 - 3.0 * e1 * e2 + 2.0 * e1.powi(3);
    let c4 = e4 - 4.0 * e1 * e3 + 6.0 * e1 * e1 * e2 - 3.0 * e1.powi(4);
    if var <= 1e-14 * e2.abs() {
        return (None, None, var.max(0.0));
    }
    (Some(c3 / var.powf(1.5)), Some(c4 / (var * var)), var)
}

/// Kurtosis of `L` for a symmetric first step (`q = 1/2`):
/// `6(8p²-4p-1) Γ(2(2p-1))² / ((8p-5) Γ(4(2p-1)))`.
pub fn symmetric_kurtosis(p: f64) -> Result<f64> {
    if !(p > 0.75 && p <= 1.0) {
        return domain(format!("kurtosis of L needs 3/4 < p <= 1 (p = {p})"));
    }
    let alpha = 2.0 * p - 1.0;
    let g2 = gamma(2.0 * alpha);
    Ok(6.0 * (8.0 * p * p - 4.0 * p - 1.0) * g2 * g2 / ((8.0 * p - 5.0) * gamma(4.0 * alpha)))
}

/// Exact comparison of `p` against 3/4.
pub fn classify_regime(p: f64) -> RegimeTag {
    RegimeTag::of(p)
}

/// Probability mass function of `S_n` on `{-n, -n+2, ..., n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    n: u64,
    /// `probs[j] = P(S_n = 2j - n)`
    probs: Vec<f64>,
}

impl Pmf {
    pub(crate) fn from_probs(n: u64, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len() as u64, n + 1);
        Pmf { n, probs }
    }

    pub fn horizon(&self) -> u64 {
        self.n
    }

    /// `P(S_n = s)`; zero off the support and for the wrong parity.
    pub fn prob(&self, s: i64) -> f64 {
        let shifted = s + self.n as i64;
        if s.unsigned_abs() > self.n || shifted % 2 != 0 {
            return 0.0;
        }
        self.probs[(shifted / 2) as usize]
    }

    /// `(s, P(S_n = s))` over the support, ascending in `s`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n as i64;
        self.probs.iter().enumerate().map(move |(j, &w)| (2 * j as i64 - n, w))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn moments(&self) -> MomentVector {
        let mut m = [0.0; 4];
        for (s, w) in self.iter() {
            let s = s as f64;
            let mut pow = w;
            for mk in m.iter_mut() {
                pow *= s;
                *mk += pow;
            }
        }
        MomentVector {
            n: self.n,
            m1: m[0],
            m2: m[1],
            m3: m[2],
            m4: m[3],
        }
    }

    /// Largest elementwise difference from another pmf of the same horizon.
    pub fn max_abs_diff(&self, other: &Pmf) -> f64 {
        assert_eq!(self.n, other.n, "pmfs have different horizons");
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Exact law of `S_n` by dynamic programming over `(k, S_k)` with the
/// sufficient-statistic transition. `O(n²)`.
pub fn enumerate_distribution(n: u64, p: f64, q: f64) -> Result<Pmf> {
    check_probability("memory p", p)?;
    check_probability("first-step q", q)?;
    if n == 0 {
        return Err(ErwError::InvalidParams("horizon must be at least 1".into()));
    }
    let mut probs = vec![1.0 - q, q];
    for k in 1..n {
        let mut next = vec![0.0; probs.len() + 1];
        for (j, &w) in probs.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let s = 2 * j as i64 - k as i64;
            let up = step_probability(s, k, p)?;
            next[j + 1] += w * up;
            next[j] += w * (1.0 - up);
        }
        probs = next;
    }
    Ok(Pmf::from_probs(n, probs))
}

/// Conditional moments of the martingale innovation `ε_{n+1} = S_{n+1} - γ_n S_n`
/// given `S_n = s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsMoments {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

/// With `r = (2p - 1) s / n`:
/// `E[ε²] = 1 - r²`, `E[ε³] = 2r(r² - 1)`, `E[ε⁴] = 1 + 2r² - 3r⁴`.
pub fn conditional_eps_moments(s: i64, n: u64, p: f64) -> Result<EpsMoments> {
    check_probability("memory p", p)?;
    if n == 0 || s.unsigned_abs() > n {
        return Err(ErwError::InvalidState(format!("need n >= 1 and |s| <= n (s = {s}, n = {n})")));
    }
    let r = (2.0 * p - 1.0) * (s as f64 / n as f64);
    let r2 = r * r;
    Ok(EpsMoments {
        m2: 1.0 - r2,
        m3: 2.0 * r * (r2 - 1.0),
        m4: 1.0 + 2.0 * r2 - 3.0 * r2 * r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::martingale_weight;
    use crate::walk::enumerate_history_distribution;
    use approx::assert_relative_eq;

    const GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn first_step_moments() {
        for &q in &GRID {
            let m = exact_moments(1, 0.3, q).unwrap();
            let b = 2.0 * q - 1.0;
            assert_eq!((m.m1, m.m2, m.m3, m.m4), (b, 1.0, b, 1.0));
        }
        assert!(exact_moments(0, 0.5, 0.5).is_err());
    }

    #[test]
    fn persistent_walk_moments() {
        for n in [1u64, 2, 7, 50] {
            let m = exact_moments(n, 1.0, 1.0).unwrap();
            let nf = n as f64;
            assert_eq!((m.m1, m.m2, m.m3, m.m4), (nf, nf * nf, nf.powi(3), nf.powi(4)));
        }
    }

    #[test]
    fn memoryless_second_moment() {
        for &q in &GRID {
            assert_eq!(exact_moments(1234, 0.5, q).unwrap().m2, 1234.0);
        }
    }

    #[test]
    fn recursion_matches_enumeration() {
        for &p in &GRID {
            for &q in &GRID {
                for (n, m) in MomentRecursion::new(p, q).unwrap().take(12).enumerate() {
                    let e = enumerate_distribution(n as u64 + 1, p, q).unwrap().moments();
                    for k in 1..=4 {
                        assert!(
                            (m.order(k) - e.order(k)).abs() <= 1e-10 * e.order(k).abs().max(1.0),
                            "p={p} q={q} n={} k={k}",
                            n + 1
                        );
                    }
                    assert!(m.is_consistent(1e-12));
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_recursion() {
        for &p in &[0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45, 0.55, 0.6, 0.7, 0.8, 0.85, 0.9, 1.0] {
            for &q in &[0.0, 0.3, 0.5, 1.0] {
                let mut rec = MomentRecursion::new(p, q).unwrap();
                let mut n_prev = 0;
                for &n in &[1u64, 2, 3, 10, 100, 1000, 5000] {
                    let m = rec.nth((n - n_prev - 1) as usize).unwrap();
                    n_prev = n;
                    for k in 1..=4u8 {
                        let closed = closed_form_moment(k, n, p, q).unwrap();
                        assert!(
                            (closed - m.order(k)).abs() <= 1e-8 * m.order(k).abs(),
                            "k={k} n={n} p={p} q={q}: closed {closed} recursion {}",
                            m.order(k)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn second_moment_closed_form_at_gamma_pole() {
        // p = 1/4: 2α = -1 and Γ(2α) has a pole; the closed form stays finite.
        for n in [2u64, 10, 100] {
            let m = exact_moments(n, 0.25, 0.5).unwrap();
            let c = closed_form_moment(2, n, 0.25, 0.5).unwrap();
            assert!((c - m.m2).abs() <= 1e-10 * m.m2, "n={n}: {c} vs {}", m.m2);
        }
    }

    #[test]
    fn quartic_closed_form_superdiffusive() {
        let m = exact_moments(50, 0.9, 0.5).unwrap();
        assert!(rel(closed_form_moment(4, 50, 0.9, 0.5).unwrap(), m.m4) <= 1e-8);
    }

    #[test]
    fn closed_form_first_moment_at_one() {
        for &q in &GRID {
            assert_eq!(closed_form_moment(1, 1, 0.7, q).unwrap(), 2.0 * q - 1.0);
        }
    }

    #[test]
    fn closed_form_singularities() {
        assert!(closed_form_moment(1, 5, 0.0, 0.5).is_err());
        for k in 2..=4 {
            assert!(closed_form_moment(k, 5, 0.75, 0.5).is_err());
            assert!(closed_form_moment(k, 5, 0.75 + 5e-7, 0.5).is_err());
        }
        assert!(closed_form_moment(3, 5, 0.5, 0.5).is_err());
        assert!(closed_form_moment(2, 5, 0.5, 0.5).is_ok());
        assert!(closed_form_moment(4, 5, 0.625, 0.5).is_err());
        assert!(closed_form_moment(5, 5, 0.6, 0.5).is_err());
    }

    #[test]
    fn martingale_mean_identity() {
        for &p in &[0.1, 0.5, 0.75, 0.9] {
            for &q in &[0.0, 0.2, 1.0] {
                for m in MomentRecursion::new(p, q).unwrap().take(20_000).step_by(333) {
                    let a = martingale_weight(m.n, p).unwrap();
                    assert!((a * m.m1 - (2.0 * q - 1.0)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn limit_moments_at_full_memory() {
        for &q in &GRID {
            let l = limit_moments(1.0, q).unwrap();
            let b = 2.0 * q - 1.0;
            assert_relative_eq!(l.e1, b, epsilon = 1e-15);
            assert_eq!(l.e2, 1.0);
            assert_relative_eq!(l.e3, b, epsilon = 1e-15);
            assert_eq!(l.e4, 1.0);
        }
        assert_eq!(limit_moments(1.0, 1.0).unwrap().kurtosis, None);
        assert!((limit_moments(1.0, 0.5).unwrap().kurtosis.unwrap() - 1.0).abs() < 1e-14);
        assert!(limit_moments(0.75, 0.5).is_err());
        assert!(limit_moments(0.5, 0.5).is_err());
    }

    #[test]
    fn symmetric_limit_shape() {
        let mut prev = f64::INFINITY;
        for i in 1..=250 {
            let p = 0.75 + 0.001 * i as f64;
            let l = limit_moments(p, 0.5).unwrap();
            assert_eq!(l.e1, 0.0);
            assert_eq!(l.e3, 0.0);
            assert_eq!(l.skewness, Some(0.0));
            let k = l.kurtosis.unwrap();
            assert!((1.0 - 1e-12..3.0).contains(&k), "p={p} kurtosis {k}");
            assert!(k < prev, "kurtosis not decreasing at p={p}");
            assert_relative_eq!(k, symmetric_kurtosis(p).unwrap(), max_relative = 1e-12);
            assert!(l.sigma2 > 0.0);
            prev = k;
        }
    }

    #[test]
    fn scaled_moments_approach_limit() {
        let p = 0.85;
        let alpha = 2.0 * p - 1.0;
        let n = 1_000_000u64;
        for &q in &[0.5, 0.8] {
            let m = exact_moments(n, p, q).unwrap();
            let l = limit_moments(p, q).unwrap();
            for k in 1..=4u8 {
                let scaled = m.order(k) / (n as f64).powf(alpha * k as f64);
                let target = l.raw(k);
                if target == 0.0 {
                    assert!(scaled.abs() < 1e-12);
                } else {
                    assert!(rel(scaled, target) < 0.01, "k={k} q={q}: {scaled} vs {target}");
                }
            }
        }
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify_regime(0.5), RegimeTag::Diffusive);
        assert_eq!(classify_regime(0.75), RegimeTag::Critical);
        assert_eq!(classify_regime(0.9), RegimeTag::Superdiffusive);
    }

    #[test]
    fn enumeration_examples() {
        let one = enumerate_distribution(1, 0.4, 0.3).unwrap();
        assert_eq!(one.prob(1), 0.3);
        assert_eq!(one.prob(-1), 0.7);
        let two = enumerate_distribution(2, 0.75, 0.5).unwrap();
        assert_eq!((two.prob(2), two.prob(0), two.prob(-2)), (0.375, 0.25, 0.375));
        for &q in &GRID {
            let t = enumerate_distribution(2, 0.5, q).unwrap();
            assert!((t.prob(2) - q / 2.0).abs() < 1e-16);
            assert!((t.prob(0) - 0.5).abs() < 1e-16);
            assert!((t.prob(-2) - (1.0 - q) / 2.0).abs() < 1e-16);
        }
        let big = enumerate_distribution(22, 0.8, 0.6).unwrap();
        assert!((big.total() - 1.0).abs() < 1e-14);
        assert_eq!(big.prob(3), 0.0);
        assert_eq!(big.prob(24), 0.0);
    }

    #[test]
    fn samplers_agree_exactly() {
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        for &p in &grid {
            for &q in &grid {
                for n in 1..=10 {
                    let a = enumerate_distribution(n, p, q).unwrap();
                    let b = enumerate_history_distribution(n, p, q).unwrap();
                    assert!(a.max_abs_diff(&b) <= 1e-12, "p={p} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn eps_moment_examples() {
        for (s, n) in [(0i64, 1u64), (3, 5), (-7, 7), (10, 100)] {
            let e = conditional_eps_moments(s, n, 0.5).unwrap();
            assert_eq!((e.m2, e.m3, e.m4), (1.0, 0.0, 1.0));
        }
        for &p in &GRID {
            let e = conditional_eps_moments(0, 10, p).unwrap();
            assert_eq!((e.m2, e.m3, e.m4), (1.0, 0.0, 1.0));
        }
        assert!(conditional_eps_moments(5, 4, 0.5).is_err());
        assert!(conditional_eps_moments(0, 0, 0.5).is_err());
    }

    #[test]
    fn eps_moments_match_two_point_law() {
        // ε = X - r with P(X = +1) = (1 + r)/2
        for &p in &GRID {
            for (s, n) in [(1i64, 1u64), (2, 4), (-3, 9), (8, 10)] {
                let e = conditional_eps_moments(s, n, p).unwrap();
                let r = (2.0 * p - 1.0) * s as f64 / n as f64;
                let up = (1.0 + r) / 2.0;
                let mom = |k: i32| up * (1.0 - r).powi(k) + (1.0 - up) * (-1.0 - r).powi(k);
                assert!((e.m2 - mom(2)).abs() < 1e-14);
                assert!((e.m3 - mom(3)).abs() < 1e-14);
                assert!((e.m4 - mom(4)).abs() < 1e-14);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn eps_bounds(n in 1u64..100_000, frac in 0.0f64..=1.0, p in 0.0f64..=1.0) {
                let s = (frac * n as f64) as i64 * if frac > 0.5 { 1 } else { -1 };
                let e = conditional_eps_moments(s, n, p).unwrap();
                prop_assert!((0.0..=1.0).contains(&e.m2));
                prop_assert!(e.m4 <= 4.0 / 3.0 + 1e-15);
            }

            #[test]
            fn recursion_outputs_are_consistent(p in 0.0f64..=1.0, q in 0.0f64..=1.0, n in 1u64..3000) {
                let m = exact_moments(n, p, q).unwrap();
                prop_assert!(m.is_consistent(1e-9));
            }
        }
    }
}
