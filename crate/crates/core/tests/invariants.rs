use erw_core::harness::{compare_limit, scale_terminal, BracketTracker, SampleContext};
use erw_core::moments::{exact_moments, limit_moments};
use erw_core::rng::path_rng;
use erw_core::special::{gamma, gamma_ratio_sum, martingale_weight, v_asymptote, WeightSequence, WeightTable};
use erw_core::walk::{ensemble_terminals, run_path};
use erw_core::WalkParams;
use proptest::prelude::*;

/// `Σ_{k=1}^n Γ(k+a)/Γ(k+b)` by multiplying term ratios.
fn direct_sum(a: f64, b: f64, n: u64) -> f64 {
    let mut t = (statrs::function::gamma::ln_gamma(1.0 + a) - statrs::function::gamma::ln_gamma(1.0 + b)).exp();
    let mut sum = 0.0;
    for k in 1..=n {
        sum += t;
        t *= (k as f64 + a) / (k as f64 + b);
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma_ratio_sum_matches_direct(a in 0.0f64..20.0, b in 0.0f64..20.0, n in 1u64..3000) {
        let gap = b - a - 1.0;
        prop_assume!(gap.abs() > 1e-3);
        let closed = gamma_ratio_sum(a, b, n).unwrap();
        let direct = direct_sum(a, b, n);
        // Cancellation in the closed form scales like (a + b + 2) / |gap|.
        let cond = ((a + b + 2.0) / gap.abs()).max(1.0);
        prop_assert!((closed - direct).abs() <= 1e-12 * cond * direct.abs(), "closed {closed} direct {direct}");
    }

    #[test]
    fn weight_recursion_at_any_point(k in 1u64..10_000_000, p in 0.01f64..=1.0) {
        let g = 1.0 + (2.0 * p - 1.0) / k as f64;
        let lhs = g * martingale_weight(k + 1, p).unwrap();
        let rhs = martingale_weight(k, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn moment_outputs_are_consistent(n in 1u64..5000, p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        prop_assert!(exact_moments(n, p, q).unwrap().is_consistent(1e-9));
    }

    #[test]
    fn bracket_never_exceeds_v(p in 0.01f64..=1.0, seed in any::<u64>()) {
        let n = 2000;
        let params = WalkParams::new(p, 0.5, n, seed).unwrap();
        let table = WeightTable::new(p, n).unwrap();
        let mut tracker = BracketTracker::new(&table, n).unwrap();
        run_path(&params, &mut path_rng(seed, 0), &mut tracker);
        prop_assert_eq!(tracker.violations, 0);
        prop_assert!(tracker.max_excess <= 1e-12);
    }
}

#[test]
fn superdiffusive_weight_scaling() {
    let n = 1_000_000u64;
    for p in [0.8, 0.9, 1.0] {
        let scaled = (n as f64).powf(2.0 * p - 1.0) * martingale_weight(n, p).unwrap();
        let target = gamma(2.0 * p);
        assert!((scaled / target - 1.0).abs() < 0.005, "p={p}: {scaled} vs {target}");
    }
}

#[test]
fn critical_variance_grows_like_quarter_pi_log() {
    // v_n = (π/4)(ln n + c) + o(1); the constant c makes v_n / ln n converge
    // slowly, so the slope over a decade is compared instead.
    let v: Vec<f64> = WeightSequence::new(0.75).unwrap().take(1_000_000).map(|pt| pt.v).collect();
    let slope = (v[999_999] - v[99_999]) / 10f64.ln();
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    assert!((slope / quarter_pi - 1.0).abs() < 0.02, "slope {slope}");
    let ratio = v[999_999] / 1e6f64.ln();
    assert!(ratio > quarter_pi && ratio < 1.1 * quarter_pi, "ratio {ratio}");
}

#[test]
fn superdiffusive_v_increases_to_limit() {
    for p in [0.8, 0.95] {
        let limit = v_asymptote(p).unwrap().constant;
        let t = WeightTable::new(p, 100_000).unwrap();
        assert!(t.variances().windows(2).all(|w| w[0] < w[1]));
        assert!(t.v(100_000) < limit);
    }
}

#[test]
fn symmetric_ensembles_have_small_odd_moments() {
    for (p, seed) in [(0.8, 11u64), (0.9, 12), (0.95, 13)] {
        let n = 2000;
        let params = WalkParams::new(p, 0.5, n, seed).unwrap();
        let samples: Vec<f64> = ensemble_terminals(&params, 4000)
            .unwrap()
            .into_iter()
            .map(|s| scale_terminal(s, n, p).unwrap())
            .collect();
        let reports = compare_limit(&samples, p, 0.5, SampleContext { horizon: n, seed }).unwrap();
        for r in reports.iter().filter(|r| r.name == "L-moment-1" || r.name == "L-moment-3") {
            assert_eq!(r.expected, 0.0);
            assert!(r.observed.abs() <= 4.0 * r.standard_error, "{r:?}");
        }
    }
}

#[test]
fn scaled_moments_approach_limit_moments() {
    let (p, q, n) = (0.85, 0.5, 1_000_000u64);
    let m = exact_moments(n, p, q).unwrap();
    let lm = limit_moments(p, q).unwrap();
    let scale = (n as f64).powf(2.0 * p - 1.0);
    for k in [2u8, 4] {
        let scaled = m.order(k) / scale.powi(k as i32);
        assert!((scaled / lm.raw(k) - 1.0).abs() < 0.01, "k={k}: {scaled} vs {}", lm.raw(k));
    }
}
