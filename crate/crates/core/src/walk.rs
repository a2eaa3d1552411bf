//! Exact samplers for the elephant random walk.
//!
//! The walk starts at `S_0 = 0`. The first step is `+1` with probability `q`.
//! Afterwards step `n + 1` recalls a uniformly chosen past step and repeats it
//! with probability `p` or reverses it with probability `1 - p`.
//!
//! Because the conditional law of the next step depends on the past only
//! through `S_n / n`, the canonical sampler keeps two numbers of state and
//! draws the step from [`step_probability`]. The full-history sampler
//! ([`advance_with_history`]) is kept as a reference implementation and as the
//! source of the brute-force oracle [`enumerate_history_distribution`].

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ErwError, Result};
use crate::moments::Pmf;
use crate::rng::{stream_rng, substream_seed};

/// Largest supported horizon.
pub const MAX_HORIZON: u64 = 1 << 62;

/// Memory, first-step bias, horizon and seed: the identity of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub memory_p: f64,
    pub first_q: f64,
    pub horizon_n: u64,
    pub seed: u64,
}

impl WalkParams {
    pub fn new(memory_p: f64, first_q: f64, horizon_n: u64, seed: u64) -> Result<Self> {
        let params = WalkParams {
            memory_p,
            first_q,
            horizon_n,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("memory p", self.memory_p)?;
        check_probability("first-step q", self.first_q)?;
        if self.horizon_n == 0 || self.horizon_n > MAX_HORIZON {
            return Err(ErwError::InvalidParams(format!(
                "horizon must lie in [1, 2^62], got {}",
                self.horizon_n
            )));
        }
        Ok(())
    }

    /// Half the drift coefficient: `P(up | S_n = s) = 1/2 + half_drift * s / n`.
    #[inline]
    fn half_drift(&self) -> f64 {
        self.memory_p - 0.5
    }
}

pub(crate) fn check_probability(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(ErwError::InvalidParams(format!(
            "{name} must lie in [0, 1], got {x}"
        )))
    }
}

/// Time and position of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkState {
    pub n: u64,
    pub s: i64,
}

impl WalkState {
    pub const ORIGIN: WalkState = WalkState { n: 0, s: 0 };

    pub fn new(n: u64, s: i64) -> Result<Self> {
        check_state(s, n)?;
        Ok(WalkState { n, s })
    }
}

fn check_state(s: i64, n: u64) -> Result<()> {
    if s.unsigned_abs() > n {
        return Err(ErwError::InvalidState(format!("|s| = {} exceeds n = {n}", s.unsigned_abs())));
    }
    if (s.unsigned_abs() ^ n) & 1 != 0 {
        return Err(ErwError::InvalidState(format!("s = {s} and n = {n} differ in parity")));
    }
    Ok(())
}

/// A simulated path `S_1, ..., S_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: WalkParams,
    pub positions: Vec<i64>,
}

impl Trajectory {
    /// Wraps an explicit path after checking the nearest-neighbour invariants.
    pub fn from_positions(params: WalkParams, positions: Vec<i64>) -> Result<Self> {
        if positions.len() as u64 != params.horizon_n {
            return Err(ErwError::InvalidState(format!(
                "path has {} positions, horizon is {}",
                positions.len(),
                params.horizon_n
            )));
        }
        if positions[0].abs() != 1 {
            return Err(ErwError::InvalidState("S_1 must be +1 or -1".into()));
        }
        if let Some(k) = positions.windows(2).position(|w| (w[1] - w[0]).abs() != 1) {
            return Err(ErwError::InvalidState(format!(
                "increment S_{} - S_{} is not +-1",
                k + 2,
                k + 1
            )));
        }
        Ok(Trajectory { params, positions })
    }

    pub fn horizon(&self) -> u64 {
        self.positions.len() as u64
    }

    pub fn terminal(&self) -> i64 {
        *self.positions.last().expect("trajectory is never empty")
    }

    /// `(k, S_k)` pairs for `k = 1..=n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.positions.iter().enumerate().map(|(i, &s)| (i as u64 + 1, s))
    }
}

/// Receives every visited state `(n, S_n)`, `n = 1..=horizon`, of a simulated path.
pub trait PathObserver {
    fn observe(&mut self, n: u64, s: i64);
}

impl PathObserver for () {
    #[inline(always)]
    fn observe(&mut self, _n: u64, _s: i64) {}
}

impl PathObserver for Vec<i64> {
    #[inline]
    fn observe(&mut self, _n: u64, s: i64) {
        self.push(s);
    }
}

impl<A: PathObserver, B: PathObserver> PathObserver for (A, B) {
    #[inline]
    fn observe(&mut self, n: u64, s: i64) {
        self.0.observe(n, s);
        self.1.observe(n, s);
    }
}

impl<O: PathObserver + ?Sized> PathObserver for &mut O {
    #[inline]
    fn observe(&mut self, n: u64, s: i64) {
        (**self).observe(n, s);
    }
}

/// Rademacher first step: `+1` with probability `q`.
#[inline]
pub fn first_step<R: Rng + ?Sized>(q: f64, rng: &mut R) -> i64 {
    if rng.gen::<f64>() < q {
        1
    } else {
        -1
    }
}

/// `P(X_{n+1} = +1 | S_n = s) = 1/2 + (2p - 1) s / (2n)`.
pub fn step_probability(s: i64, n: u64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(ErwError::InvalidState("step probability is undefined at n = 0".into()));
    }
    check_state(s, n)?;
    Ok(up_probability(s, n, p - 0.5))
}

#[inline(always)]
fn up_probability(s: i64, n: u64, half_drift: f64) -> f64 {
    // |s| <= n and |half_drift| <= 1/2 keep this in [0, 1] up to rounding.
    (0.5 + half_drift * (s as f64 / n as f64)).clamp(0.0, 1.0)
}

/// One step of the sufficient-statistic sampler.
#[inline]
pub fn advance<R: Rng + ?Sized>(state: WalkState, p: f64, rng: &mut R) -> WalkState {
    debug_assert!(state.n >= 1, "advance needs at least one past step");
    let up = up_probability(state.s, state.n, p - 0.5);
    let step = if rng.gen::<f64>() < up { 1 } else { -1 };
    WalkState {
        n: state.n + 1,
        s: state.s + step,
    }
}

/// The deterministic part of the history rule: repeat (`keep = +1`) or
/// reverse (`keep = -1`) the step recalled at zero-based position `recalled`.
#[inline]
pub fn history_step(history: &[i64], keep: i64, recalled: usize) -> i64 {
    keep * history[recalled]
}

/// One step of the full-history sampler: draws the recalled time uniformly and
/// the repeat/reverse coin independently.
pub fn advance_with_history<R: Rng + ?Sized>(history: &[i64], p: f64, rng: &mut R) -> Result<i64> {
    if history.is_empty() {
        return Err(ErwError::InvalidState("history sampler needs at least one past step".into()));
    }
    let recalled = rng.gen_range(0..history.len());
    let keep = if rng.gen::<f64>() < p { 1 } else { -1 };
    Ok(history_step(history, keep, recalled))
}

/// Runs one path with the sufficient-statistic sampler, feeding every state to `observer`.
pub fn run_path<R: Rng + ?Sized, O: PathObserver>(
    params: &WalkParams,
    rng: &mut R,
    observer: &mut O,
) -> WalkState {
    let half_drift = params.half_drift();
    let mut s = first_step(params.first_q, rng);
    observer.observe(1, s);
    for n in 1..params.horizon_n {
        let up = up_probability(s, n, half_drift);
        s += if rng.gen::<f64>() < up { 1 } else { -1 };
        observer.observe(n + 1, s);
    }
    WalkState {
        n: params.horizon_n,
        s,
    }
}

/// Simulates path `index` of the ensemble defined by `params.seed`.
pub fn simulate_path(params: &WalkParams, index: u64) -> Trajectory {
    simulate_stream(params, substream_seed(params.seed, index))
}

/// Simulates a path driven directly by the given substream seed.
pub fn simulate_stream(params: &WalkParams, stream_seed: u64) -> Trajectory {
    let mut rng = stream_rng(stream_seed);
    let mut positions = Vec::with_capacity(params.horizon_n as usize);
    run_path(params, &mut rng, &mut positions);
    Trajectory {
        params: *params,
        positions,
    }
}

/// Simulates substream 0 of `params.seed`.
pub fn simulate(params: &WalkParams) -> Trajectory {
    simulate_path(params, 0)
}

fn check_paths(n_paths: u64) -> Result<()> {
    if n_paths == 0 {
        Err(ErwError::InvalidParams("an ensemble needs at least one path".into()))
    } else {
        Ok(())
    }
}

/// Full trajectories for paths `0..n_paths`. Memory grows as `n_paths * horizon`;
/// use [`ensemble_terminals`] or [`ensemble_observed`] for large runs.
pub fn simulate_ensemble(params: &WalkParams, n_paths: u64) -> Result<Vec<Trajectory>> {
    params.validate()?;
    check_paths(n_paths)?;
    Ok((0..n_paths)
        .into_par_iter()
        .map(|i| simulate_path(params, i))
        .collect())
}

/// Terminal positions `S_n` of paths `0..n_paths`, in path order.
pub fn ensemble_terminals(params: &WalkParams, n_paths: u64) -> Result<Vec<i64>> {
    params.validate()?;
    check_paths(n_paths)?;
    Ok((0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(substream_seed(params.seed, i));
            run_path(params, &mut rng, &mut ()).s
        })
        .collect())
}

/// Runs paths `0..n_paths`, each with its own observer built by `make(i)`.
/// Results come back in path order whatever the thread count.
pub fn ensemble_observed<O, F>(params: &WalkParams, n_paths: u64, make: F) -> Result<Vec<(WalkState, O)>>
where
    O: PathObserver + Send,
    F: Fn(u64) -> O + Sync,
{
    params.validate()?;
    check_paths(n_paths)?;
    Ok((0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(substream_seed(params.seed, i));
            let mut obs = make(i);
            let state = run_path(params, &mut rng, &mut obs);
            (state, obs)
        })
        .collect())
}

/// Exact law of `S_n` obtained by enumerating every history together with the
/// recalled-time and repeat/reverse randomness of [`advance_with_history`].
///
/// Cost grows as `2^n`; intended for `n <= 16`.
pub fn enumerate_history_distribution(n: u64, p: f64, q: f64) -> Result<Pmf> {
    check_probability("memory p", p)?;
    check_probability("first-step q", q)?;
    if n == 0 {
        return Err(ErwError::InvalidParams("horizon must be at least 1".into()));
    }
    if n > 24 {
        return Err(ErwError::InvalidParams(format!(
            "history enumeration is exponential; n = {n} exceeds 24"
        )));
    }
    let mut probs = vec![0.0; n as usize + 1];
    let mut history = Vec::with_capacity(n as usize);
    for (first, weight) in [(1i64, q), (-1i64, 1.0 - q)] {
        if weight == 0.0 {
            continue;
        }
        history.push(first);
        descend(&mut history, weight, n as usize, p, &mut probs);
        history.pop();
    }
    Ok(Pmf::from_probs(n, probs))
}

fn descend(history: &mut Vec<i64>, weight: f64, n: usize, p: f64, probs: &mut [f64]) {
    let k = history.len();
    if k == n {
        let s: i64 = history.iter().sum();
        probs[((s + n as i64) / 2) as usize] += weight;
        return;
    }
    // Law of the next step from every (recalled, keep) outcome.
    let mut up = 0.0;
    let mut down = 0.0;
    let pick = 1.0 / k as f64;
    for recalled in 0..k {
        for (keep, keep_prob) in [(1i64, p), (-1i64, 1.0 - p)] {
            let w = pick * keep_prob;
            if history_step(history, keep, recalled) == 1 {
                up += w;
            } else {
                down += w;
            }
        }
    }
    for (spin, w) in [(1i64, up), (-1i64, down)] {
        if w == 0.0 {
            continue;
        }
        history.push(spin);
        descend(history, weight * w, n, p, probs);
        history.pop();
    }
}
