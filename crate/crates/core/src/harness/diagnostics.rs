//! The martingale `M_k = a_k S_k` and its predictable bracket along a path.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::moments::conditional_eps_moments;
use crate::special::WeightTable;
use crate::walk::{PathObserver, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticPoint {
    pub k: u64,
    /// `M_k = a_k S_k`
    pub martingale: f64,
    /// `⟨M⟩_k = Σ_{j≤k} a_j² E[ε_j² | F_{j-1}]`
    pub bracket: f64,
}

/// `(k, M_k, ⟨M⟩_k)` for `k = 1..=n`.
pub fn martingale_diagnostics(traj: &Trajectory, weights: &WeightTable) -> Result<Vec<DiagnosticPoint>> {
    check_match(traj.params.memory_p, traj.horizon(), weights)?;
    let p = weights.p();
    let mut out = Vec::with_capacity(traj.positions.len());
    let mut bracket = 0.0;
    let mut prev = 0i64;
    for (k, s) in traj.iter() {
        let a = weights.a(k);
        let m2 = if k == 1 {
            1.0
        } else {
            conditional_eps_moments(prev, k - 1, p)?.m2
        };
        bracket += a * a * m2;
        out.push(DiagnosticPoint {
            k,
            martingale: a * s as f64,
            bracket,
        });
        prev = s;
    }
    Ok(out)
}

fn check_match(p: f64, horizon: u64, weights: &WeightTable) -> Result<()> {
    if weights.horizon() != horizon {
        return domain(format!(
            "weight table horizon {} does not match path horizon {horizon}",
            weights.horizon()
        ));
    }
    if weights.p() != p {
        return domain(format!("weight table built for p = {} but path has p = {p}", weights.p()));
    }
    Ok(())
}

/// Streaming bracket accumulator that records how far `⟨M⟩_k` gets above `v_k`.
#[derive(Debug, Clone)]
pub struct BracketTracker<'a> {
    weights: &'a WeightTable,
    drift: f64,
    prev: i64,
    pub bracket: f64,
    /// Largest `⟨M⟩_k / v_k - 1` seen so far (`≤ 0` when the bound holds).
    pub max_excess: f64,
    /// Number of `k` with `⟨M⟩_k > v_k (1 + 1e-12)`.
    pub violations: u64,
}

impl<'a> BracketTracker<'a> {
    pub fn new(weights: &'a WeightTable, horizon: u64) -> Result<Self> {
        check_match(weights.p(), horizon, weights)?;
        Ok(BracketTracker {
            weights,
            drift: 2.0 * weights.p() - 1.0,
            prev: 0,
            bracket: 0.0,
            max_excess: f64::NEG_INFINITY,
            violations: 0,
        })
    }

    /// `⟨M⟩_n / v_n` at the last observed time `n`.
    pub fn ratio_at(&self, n: u64) -> f64 {
        self.bracket / self.weights.v(n)
    }
}

impl PathObserver for BracketTracker<'_> {
    #[inline]
    fn observe(&mut self, k: u64, s: i64) {
        let a = self.weights.a(k);
        let m2 = if k == 1 {
            1.0
        } else {
            let r = self.drift * self.prev as f64 / (k - 1) as f64;
            1.0 - r * r
        };
        self.bracket += a * a * m2;
        let v = self.weights.v(k);
        let excess = self.bracket / v - 1.0;
        self.max_excess = self.max_excess.max(excess);
        if self.bracket > v * (1.0 + 1e-12) {
            self.violations += 1;
        }
        self.prev = s;
    }
}
