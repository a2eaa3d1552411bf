//! Scaled terminal values, quadratic strong law sums and LIL ratios.

use crate::error::{domain, Result};
use crate::special::RegimeTag;
use crate::walk::{PathObserver, Trajectory};

/// First time at which the LIL ratios are evaluated (`ln ln ln 16 > 0`).
pub const LIL_START: u64 = 16;

/// `S_n` under the regime scaling: `√n`, `√(n ln n)` or `n^{2p-1}`.
pub fn scale_terminal(s: i64, n: u64, p: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("scaled terminal needs n >= 2 (n = {n})"));
    }
    let x = s as f64;
    let nf = n as f64;
    Ok(match RegimeTag::of(p) {
        RegimeTag::Diffusive => x / nf.sqrt(),
        RegimeTag::Critical => x / (nf * nf.ln()).sqrt(),
        RegimeTag::Superdiffusive => x / nf.powf(2.0 * p - 1.0),
    })
}

pub fn scaled_terminal(traj: &Trajectory) -> Result<f64> {
    scale_terminal(traj.terminal(), traj.horizon(), traj.params.memory_p)
}

#[inline]
fn lil_ratio_diffusive(k: u64, s: i64) -> f64 {
    let kf = k as f64;
    let x = s as f64;
    x * x / (2.0 * kf * kf.ln().ln())
}

#[inline]
fn lil_ratio_critical(k: u64, s: i64) -> f64 {
    let kf = k as f64;
    let x = s as f64;
    x * x / (2.0 * kf * kf.ln() * kf.ln().ln().ln())
}

/// `(1/ln n) Σ_{k=1}^n (S_k/k)²`, recomputed from the stored path.
pub fn qsl_diffusive(traj: &Trajectory) -> Result<f64> {
    let n = traj.horizon();
    if n < 2 {
        return domain(format!("diffusive quadratic strong law needs n >= 2 (n = {n})"));
    }
    let sum: f64 = traj
        .iter()
        .map(|(k, s)| {
            let r = s as f64 / k as f64;
            r * r
        })
        .sum();
    Ok(sum / (n as f64).ln())
}

/// `(1/ln ln n) Σ_{k=2}^n (S_k/(k ln k))²`, recomputed from the stored path.
pub fn qsl_critical(traj: &Trajectory) -> Result<f64> {
    let n = traj.horizon();
    if n < LIL_START {
        return domain(format!("critical quadratic strong law needs n >= 16 (n = {n})"));
    }
    let sum: f64 = traj
        .iter()
        .skip(1)
        .map(|(k, s)| {
            let kf = k as f64;
            let r = s as f64 / (kf * kf.ln());
            r * r
        })
        .sum();
    Ok(sum / (n as f64).ln().ln())
}

/// Running maximum over `k ∈ [16, n]` of the regime's LIL ratio:
/// `S_k² / (2k ln ln k)` (diffusive) or `S_k² / (2k ln k ln ln ln k)` (critical).
pub fn lil_statistic(traj: &Trajectory, regime: RegimeTag) -> Result<f64> {
    let n = traj.horizon();
    if n < LIL_START {
        return domain(format!("LIL statistic needs n >= 16 (n = {n})"));
    }
    let ratio: fn(u64, i64) -> f64 = match regime {
        RegimeTag::Diffusive => lil_ratio_diffusive,
        RegimeTag::Critical => lil_ratio_critical,
        RegimeTag::Superdiffusive => {
            return domain("no LIL normalisation in the superdiffusive regime");
        }
    };
    Ok(traj
        .iter()
        .skip(LIL_START as usize - 1)
        .map(|(k, s)| ratio(k, s))
        .fold(0.0, f64::max))
}

/// Incremental version of the path functionals, fed one state at a time.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningFunctionals {
    pub n: u64,
    /// `Σ_{k≤n} (S_k/k)²`
    pub qsl_diffusive_sum: f64,
    /// `Σ_{2≤k≤n} (S_k/(k ln k))²`
    pub qsl_critical_sum: f64,
    pub lil_max_diffusive: f64,
    pub lil_max_critical: f64,
}

impl PathObserver for RunningFunctionals {
    #[inline]
    fn observe(&mut self, n: u64, s: i64) {
        debug_assert_eq!(n, self.n + 1, "states must arrive in order");
        self.n = n;
        let kf = n as f64;
        let x = s as f64;
        let r = x / kf;
        self.qsl_diffusive_sum += r * r;
        if n >= 2 {
            let r = x / (kf * kf.ln());
            self.qsl_critical_sum += r * r;
        }
        if n >= LIL_START {
            self.lil_max_diffusive = self.lil_max_diffusive.max(lil_ratio_diffusive(n, s));
            self.lil_max_critical = self.lil_max_critical.max(lil_ratio_critical(n, s));
        }
    }
}

impl RunningFunctionals {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let mut f = RunningFunctionals::default();
        for (k, s) in traj.iter() {
            f.observe(k, s);
        }
        f
    }

    pub fn qsl_diffusive(&self) -> Result<f64> {
        if self.n < 2 {
            return domain(format!("diffusive quadratic strong law needs n >= 2 (n = {})", self.n));
        }
        Ok(self.qsl_diffusive_sum / (self.n as f64).ln())
    }

    pub fn qsl_critical(&self) -> Result<f64> {
        if self.n < LIL_START {
            return domain(format!("critical quadratic strong law needs n >= 16 (n = {})", self.n));
        }
        Ok(self.qsl_critical_sum / (self.n as f64).ln().ln())
    }

    pub fn lil(&self, regime: RegimeTag) -> Result<f64> {
        if self.n < LIL_START {
            return domain(format!("LIL statistic needs n >= 16 (n = {})", self.n));
        }
        match regime {
            RegimeTag::Diffusive => Ok(self.lil_max_diffusive),
            RegimeTag::Critical => Ok(self.lil_max_critical),
            RegimeTag::Superdiffusive => domain("no LIL normalisation in the superdiffusive regime"),
        }
    }

    /// Quadratic strong law value for the regime of `p` (diffusive or critical).
    pub fn qsl(&self, p: f64) -> Result<f64> {
        match RegimeTag::of(p) {
            RegimeTag::Diffusive => self.qsl_diffusive(),
            RegimeTag::Critical => self.qsl_critical(),
            RegimeTag::Superdiffusive => domain("no quadratic strong law in the superdiffusive regime"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{simulate, WalkParams};
    use proptest::prelude::*;

    fn traj(p: f64, positions: Vec<i64>) -> Trajectory {
        let n = positions.len() as u64;
        Trajectory::from_positions(WalkParams::new(p, 0.5, n, 0).unwrap(), positions).unwrap()
    }

    fn straight(p: f64, n: u64) -> Trajectory {
        traj(p, (1..=n as i64).collect())
    }

    /// Path that returns to zero at every even time.
    fn zigzag(p: f64, n: u64) -> Trajectory {
        traj(p, (1..=n).map(|k| (k % 2) as i64).collect())
    }

    #[test]
    fn terminal_scalings() {
        assert_eq!(scaled_terminal(&straight(1.0, 100)).unwrap(), 1.0);
        assert_eq!(scale_terminal(30, 900, 0.5).unwrap(), 1.0);
        assert_eq!(scale_terminal(0, 1000, 0.75).unwrap(), 0.0);
        let v = scale_terminal(10, 100, 0.75).unwrap();
        assert!((v - 10.0 / (100.0 * 100f64.ln()).sqrt()).abs() < 1e-15);
        assert!(scale_terminal(1, 1, 0.5).is_err());
    }

    #[test]
    fn straight_path_qsl() {
        let n = 1000;
        let v = qsl_diffusive(&straight(0.5, n)).unwrap();
        assert!((v - n as f64 / (n as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn critical_qsl_bound_and_domain() {
        let n = 500;
        let bound: f64 = (2..=n).map(|k| (k as f64).ln().powi(-2)).sum::<f64>() / (n as f64).ln().ln();
        let v = qsl_critical(&straight(0.75, n)).unwrap();
        assert!((v - bound).abs() < 1e-12 * bound);
        assert!(qsl_critical(&straight(0.75, 15)).is_err());
        assert!(qsl_critical(&straight(0.75, 16)).is_ok());
    }

    #[test]
    fn lil_domain_and_zero_path() {
        assert!(lil_statistic(&straight(0.5, 15), RegimeTag::Diffusive).is_err());
        assert!(lil_statistic(&straight(0.9, 100), RegimeTag::Superdiffusive).is_err());
        // S_k = 0 at even k, 1 at odd k: ratio at odd k only.
        let z = zigzag(0.5, 64);
        let expect = (16..=64)
            .filter(|k| k % 2 == 1)
            .map(|k| lil_ratio_diffusive(k, 1))
            .fold(0.0, f64::max);
        assert_eq!(lil_statistic(&z, RegimeTag::Diffusive).unwrap(), expect);
    }

    #[test]
    fn incremental_equals_recompute_on_simulated_paths() {
        for &p in &[0.25, 0.5, 0.75] {
            let t = simulate(&WalkParams::new(p, 0.5, 5000, 17).unwrap());
            let f = RunningFunctionals::from_trajectory(&t);
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
            assert!(close(f.qsl_diffusive().unwrap(), qsl_diffusive(&t).unwrap()));
            assert!(close(f.qsl_critical().unwrap(), qsl_critical(&t).unwrap()));
            assert_eq!(f.lil(RegimeTag::Diffusive).unwrap(), lil_statistic(&t, RegimeTag::Diffusive).unwrap());
            assert_eq!(f.lil(RegimeTag::Critical).unwrap(), lil_statistic(&t, RegimeTag::Critical).unwrap());
        }
    }

    proptest! {
        #[test]
        fn functionals_are_monotone(steps in proptest::collection::vec(prop::bool::ANY, 16..300)) {
            let mut s = 0i64;
            let mut f = RunningFunctionals::default();
            let mut prev = f;
            for (i, up) in steps.iter().enumerate() {
                s += if *up { 1 } else { -1 };
                f.observe(i as u64 + 1, s);
                prop_assert!(f.qsl_diffusive_sum >= prev.qsl_diffusive_sum);
                prop_assert!(f.qsl_critical_sum >= prev.qsl_critical_sum);
                prop_assert!(f.lil_max_diffusive >= prev.lil_max_diffusive);
                prop_assert!(f.lil_max_critical >= prev.lil_max_critical);
                prev = f;
            }
        }
    }
}
