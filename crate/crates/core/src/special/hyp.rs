//! `₃F₂(a, b, c; d, e; 1)` for convergent parameter sets.
//!
//! At unit argument the term ratio tends to one and the terms decay only
//! algebraically, like `k^{-s}` with `s = d + e + 1 - a - b - c`. For
//! `s` close to 1 a plain partial sum would need astronomically many terms,
//! so the series is split into a head summed exactly and a tail summed from the
//! large-`k` expansion of the term:
//!
//! ```text
//! t(k) = K k^{-s} exp(Σ_m g_m k^{-m}) = K Σ_m h_m k^{-s-m}
//! Σ_{k>=N} t(k) = K Σ_m h_m ζ(s + m, N)
//! ```
//!
//! The coefficients `g_m` come from the Bernoulli-polynomial form of the
//! Stirling series for `ln Γ(k + x)`, and `ζ(σ, N)` is the Hurwitz zeta
//! function evaluated by Euler–Maclaurin summation.

use crate::error::{domain, Result};

/// Bernoulli numbers `B_0 ..= B_30`.
const BERNOULLI: [f64; 31] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
];

/// Orders kept in the tail expansion.
const TAIL_ORDERS: usize = 16;

/// Terms of the series, starting with the `k = 0` term (always 1).
#[derive(Debug, Clone)]
pub struct Hyp3F2Terms {
    num: [f64; 3],
    den: [f64; 2],
    k: u64,
    term: f64,
}

impl Hyp3F2Terms {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        Hyp3F2Terms {
            num: [a, b, c],
            den: [d, e],
            k: 0,
            term: 1.0,
        }
    }
}

impl Iterator for Hyp3F2Terms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.term;
        let k = self.k as f64;
        let [a, b, c] = self.num;
        let [d, e] = self.den;
        self.term *= (a + k) * (b + k) * (c + k) / ((d + k) * (e + k) * (k + 1.0));
        self.k += 1;
        Some(out)
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Generalized hypergeometric `₃F₂(a, b, c; d, e; 1)`.
///
/// Requires `d, e` away from the non-positive integers and, unless one of
/// `a, b, c` is a non-positive integer (terminating series), `d + e > a + b + c`.
/// Absolute error is at the level of a few ulps of the result for parameters of
/// moderate size.
pub fn hyp3f2_unit(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<f64> {
    let params = [a, b, c, d, e];
    if params.iter().any(|x| !x.is_finite()) {
        return domain("3F2 parameters must be finite");
    }
    if is_nonpositive_integer(d) || is_nonpositive_integer(e) {
        return domain(format!(
            "3F2 lower parameters must not be non-positive integers (d = {d}, e = {e})"
        ));
    }

    let terminating = [a, b, c]
        .iter()
        .filter(|&&x| is_nonpositive_integer(x))
        .map(|&x| (-x) as u64)
        .min();
    if let Some(last) = terminating {
        let mut acc = CompensatedSum::default();
        for t in Hyp3F2Terms::new(a, b, c, d, e).take(last as usize + 1) {
            acc.add(t);
        }
        return Ok(acc.value());
    }

    let excess = d + e - a - b - c;
    if !(excess > 0.0) {
        return domain(format!(
            "3F2 at unit argument diverges unless d + e > a + b + c (excess = {excess})"
        ));
    }

    let scale = params.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let head = 64 + 8 * scale.ceil() as u64;

    let mut terms = Hyp3F2Terms::new(a, b, c, d, e);
    let mut acc = CompensatedSum::default();
    for t in terms.by_ref().take(head as usize) {
        acc.add(t);
    }
    let t_head = terms.next().expect("series iterator is infinite");
    if t_head == 0.0 {
        return Ok(acc.value());
    }
    acc.add(tail_sum(&params, excess + 1.0, head as f64, t_head));
    Ok(acc.value())
}

/// `Σ_{k >= n} t(k)` given `t(n)` and the decay exponent `s`.
fn tail_sum(params: &[f64; 5], s: f64, n: f64, t_n: f64) -> f64 {
    let [a, b, c, d, e] = *params;
    // g_m: coefficient of k^{-m} in ln t(k) + s ln k.
    let mut g = [0.0; TAIL_ORDERS + 1];
    for (m, gm) in g.iter_mut().enumerate().skip(1) {
        let deg = m + 1;
        let bsum = bernoulli_poly(deg, a) + bernoulli_poly(deg, b) + bernoulli_poly(deg, c)
            - bernoulli_poly(deg, d)
            - bernoulli_poly(deg, e)
            - bernoulli_poly(deg, 1.0);
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        *gm = sign * bsum / ((m * deg) as f64);
    }
    // exp(Σ g_m x^m) = Σ h_m x^m
    let mut h = [0.0; TAIL_ORDERS + 1];
    h[0] = 1.0;
    for m in 1..=TAIL_ORDERS {
        let mut acc = 0.0;
        for j in 1..=m {
            acc += j as f64 * g[j] * h[m - j];
        }
        h[m] = acc / m as f64;
    }
    let mut g_at_n = 0.0;
    for m in (1..=TAIL_ORDERS).rev() {
        g_at_n = (g_at_n + g[m]) / n;
    }
    // K = t(n) n^s e^{-G(n)}
    let k_const = t_n * (s * n.ln() - g_at_n).exp();
    let mut acc = 0.0;
    for m in (0..=TAIL_ORDERS).rev() {
        acc += h[m] * hurwitz_zeta(s + m as f64, n);
    }
    k_const * acc
}

/// Bernoulli polynomial `B_n(x) = Σ_k C(n, k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: usize, x: f64) -> f64 {
    assert!(n < BERNOULLI.len(), "Bernoulli table covers n <= 30");
    let mut binom = 1.0;
    let mut acc = 0.0;
    let mut xpow = x.powi(n as i32);
    let inv_x = if x != 0.0 { 1.0 / x } else { 0.0 };
    for (k, bk) in BERNOULLI.iter().enumerate().take(n + 1) {
        let pow = if x == 0.0 {
            if k == n {
                1.0
            } else {
                0.0
            }
        } else {
            xpow
        };
        acc += binom * bk * pow;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
        xpow *= inv_x;
    }
    acc
}

/// Hurwitz zeta `ζ(σ, x) = Σ_{k >= 0} (x + k)^{-σ}` for `σ > 1`, `x > 0`.
pub fn hurwitz_zeta(sigma: f64, x: f64) -> f64 {
    assert!(sigma > 1.0 && x > 0.0, "hurwitz_zeta needs sigma > 1 and x > 0");
    const SHIFT_TO: f64 = 30.0;
    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT_TO {
        acc += y.powf(-sigma);
        y += 1.0;
    }
    // Euler–Maclaurin remainder at y.
    let mut em = y.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * y.powf(-sigma);
    // rising = σ (σ+1) ... (σ+2j-2), fact = (2j)!
    let mut rising = sigma;
    let mut fact = 2.0;
    let mut ypow = y.powf(-sigma - 1.0);
    let inv_y2 = 1.0 / (y * y);
    for j in 1..=12usize {
        em += BERNOULLI[2 * j] / fact * rising * ypow;
        let jj = 2 * j as u64;
        rising *= (sigma + (jj - 1) as f64) * (sigma + jj as f64);
        fact *= ((jj + 1) * (jj + 2)) as f64;
        ypow *= inv_y2;
    }
    acc + em
}
