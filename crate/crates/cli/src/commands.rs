//! The four subcommands, each producing a [`Table`].

use erw_core::harness::{
    all_hard_pass, run_configured, run_protocol, scale_terminal, Gate, Provenance, RunningFunctionals, TestReport,
    CONFIGURED_TESTS, PROTOCOLS,
};
use erw_core::moments::{closed_form_moment, exact_moments, limit_moments};
use erw_core::rng::substream_seed;
use erw_core::special::{v_asymptote, VScale};
use erw_core::walk::ensemble_observed;
use erw_core::{ErwError, RegimeTag};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

fn provenance(p: Provenance) -> Cell {
    Cell::text(match p {
        Provenance::Analytic => "analytic",
        Provenance::Empirical => "empirical",
    })
}

/// One row per path: index, substream seed, `S_n`, scaled `S_n`, quadratic
/// strong law values and LIL maxima (empty where undefined for this horizon).
pub fn simulate(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let params = cfg.walk_params()?;
    let runs = ensemble_observed(&params, cfg.paths, |_| RunningFunctionals::default())?;
    let mut t = Table::new(&[
        "path",
        "substream_seed",
        "terminal",
        "scaled_terminal",
        "qsl_diffusive",
        "qsl_critical",
        "lil_diffusive",
        "lil_critical",
        "provenance",
    ]);
    for (i, (state, f)) in runs.iter().enumerate() {
        let i = i as u64;
        t.push(vec![
            Cell::Uint(i),
            Cell::Uint(substream_seed(params.seed, i)),
            Cell::Int(state.s),
            Cell::opt(scale_terminal(state.s, state.n, params.memory_p).ok()),
            Cell::opt(f.qsl_diffusive().ok()),
            Cell::opt(f.qsl_critical().ok()),
            Cell::opt(f.lil(RegimeTag::Diffusive).ok()),
            Cell::opt(f.lil(RegimeTag::Critical).ok()),
            provenance(Provenance::Empirical),
        ]);
    }
    Ok(t)
}

/// Recursion and closed form side by side; singular closed forms print `singular`.
pub fn moments(cfg: &ExperimentConfig, orders: &[u8]) -> Result<Table, CliError> {
    if let Some(k) = orders.iter().find(|k| !(1..=4).contains(*k)) {
        return Err(CliError::Usage(format!("moment order {k} is outside 1..=4")));
    }
    let (p, q) = (cfg.require_p()?, cfg.require_q()?);
    let rec = exact_moments(cfg.n, p, q)?;
    let mut t = Table::new(&["order", "recursion", "closed_form", "rel_diff", "provenance"]);
    for &k in orders {
        let r = rec.order(k);
        let (cf, diff) = match closed_form_moment(k, cfg.n, p, q) {
            Ok(v) => {
                let d = if r == 0.0 { v.abs() } else { (v - r).abs() / r.abs() };
                (Cell::Float(v), Cell::Float(d))
            }
            Err(ErwError::Domain(_)) => (Cell::text("singular"), Cell::Empty),
            Err(e) => return Err(e.into()),
        };
        t.push(vec![Cell::Uint(k as u64), Cell::Float(r), cf, diff, provenance(Provenance::Analytic)]);
    }
    Ok(t)
}

/// Regime, growth constant of `v_n`, and (for `p > 3/4`) the moments and
/// shape of `L`.
pub fn limits(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let p = cfg.require_p()?;
    let asym = v_asymptote(p)?;
    let mut t = Table::new(&["quantity", "value", "provenance"]);
    let analytic = || provenance(Provenance::Analytic);
    t.push(vec![Cell::text("regime"), Cell::text(asym.regime.as_str()), analytic()]);
    let (scale, exponent) = match asym.scale {
        VScale::Power { exponent } => ("power", Cell::Float(exponent)),
        VScale::Log => ("log", Cell::Empty),
        VScale::Finite => ("finite", Cell::Empty),
    };
    t.push(vec![Cell::text("v_scale"), Cell::text(scale), analytic()]);
    t.push(vec![Cell::text("v_exponent"), exponent, analytic()]);
    t.push(vec![Cell::text("v_constant"), Cell::Float(asym.constant), analytic()]);
    if asym.regime != RegimeTag::Superdiffusive {
        eprintln!("erwlab: moments of L exist only for p > 3/4; showing the {} constants", asym.regime);
        t.push(vec![
            Cell::text("limit_moments"),
            Cell::text("undefined for p <= 3/4"),
            analytic(),
        ]);
        return Ok(t);
    }
    let lm = limit_moments(p, cfg.require_q()?)?;
    for (name, v) in [
        ("e1", Some(lm.e1)),
        ("e2", Some(lm.e2)),
        ("e3", Some(lm.e3)),
        ("e4", Some(lm.e4)),
        ("mu", Some(lm.mu)),
        ("sigma2", Some(lm.sigma2)),
        ("skewness", lm.skewness),
        ("kurtosis", lm.kurtosis),
    ] {
        t.push(vec![Cell::text(name), Cell::opt(v), analytic()]);
    }
    Ok(t)
}

/// Runs every named check; the flag is true iff all hard-gated reports pass.
pub fn verify(cfg: &ExperimentConfig) -> Result<(Table, bool), CliError> {
    if cfg.tests.is_empty() {
        return Err(CliError::Usage("no tests requested (config key `tests` or --tests)".into()));
    }
    for name in &cfg.tests {
        if !PROTOCOLS.contains(&name.as_str()) && !CONFIGURED_TESTS.contains(&name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown test '{name}'; known: {}",
                PROTOCOLS.iter().chain(CONFIGURED_TESTS).copied().collect::<Vec<_>>().join(", ")
            )));
        }
    }
    let mut t = Table::new(&[
        "test",
        "name",
        "observed",
        "expected",
        "tolerance",
        "standard_error",
        "pass",
        "gate",
        "sample_size",
        "horizon",
        "seed",
        "observed_provenance",
        "expected_provenance",
    ]);
    let mut all = Vec::new();
    for name in &cfg.tests {
        let reports = if PROTOCOLS.contains(&name.as_str()) {
            run_protocol(name, cfg.seed)?
        } else {
            run_configured(name, &cfg.walk_params()?, cfg.paths)?
        };
        for r in &reports {
            t.push(report_row(name, r));
        }
        all.extend(reports);
    }
    Ok((t, all_hard_pass(&all)))
}

fn report_row(test: &str, r: &TestReport) -> Vec<Cell> {
    vec![
        Cell::text(test),
        Cell::text(r.name.clone()),
        Cell::Float(r.observed),
        Cell::Float(r.expected),
        Cell::Float(r.tolerance),
        Cell::Float(r.standard_error),
        Cell::Bool(r.pass),
        Cell::text(match r.gate {
            Gate::Hard => "hard",
            Gate::Monitored => "monitored",
        }),
        Cell::Uint(r.sample_size),
        Cell::Uint(r.horizon),
        Cell::Uint(r.seed),
        provenance(r.observed_provenance),
        provenance(r.expected_provenance),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: f64, q: f64, n: u64) -> ExperimentConfig {
        ExperimentConfig {
            p: Some(p),
            q: Some(q),
            n,
            paths: 3,
            ..Default::default()
        }
    }

    #[test]
    fn persistent_walk_moments_are_powers() {
        let t = moments(&cfg(1.0, 1.0, 10), &[1, 2, 3, 4]).unwrap();
        let rec: Vec<Cell> = t.rows.iter().map(|r| r[1].clone()).collect();
        assert_eq!(
            rec,
            vec![Cell::Float(10.0), Cell::Float(100.0), Cell::Float(1000.0), Cell::Float(10000.0)]
        );
    }

    #[test]
    fn half_memory_cubic_closed_form_is_singular() {
        let t = moments(&cfg(0.5, 0.5, 100), &[2, 3]).unwrap();
        assert_eq!(t.rows[0][1], Cell::Float(100.0));
        assert_eq!(t.rows[1][2], Cell::text("singular"));
    }

    #[test]
    fn straight_paths_simulate_identically() {
        let t = simulate(&cfg(1.0, 1.0, 10)).unwrap();
        assert_eq!(t.rows.len(), 3);
        for row in &t.rows {
            assert_eq!(row[2], Cell::Int(10));
        }
    }

    #[test]
    fn limits_by_regime() {
        let t = limits(&cfg(1.0, 0.5, 10)).unwrap();
        let kurt = t.rows.iter().find(|r| r[0] == Cell::text("kurtosis")).unwrap();
        match kurt[1] {
            Cell::Float(k) => assert!((k - 1.0).abs() < 1e-12),
            ref other => panic!("{other:?}"),
        }
        let t = limits(&cfg(0.75, 0.5, 10)).unwrap();
        let c = t.rows.iter().find(|r| r[0] == Cell::text("v_constant")).unwrap();
        assert_eq!(c[1], Cell::Float(std::f64::consts::FRAC_PI_4));
        assert!(!t.rows.iter().any(|r| r[0] == Cell::text("e2")));
        let t = limits(&cfg(0.5, 0.5, 10)).unwrap();
        let c = t.rows.iter().find(|r| r[0] == Cell::text("v_constant")).unwrap();
        assert_eq!(c[1], Cell::Float(1.0));
    }

    #[test]
    fn verify_rejects_empty_and_unknown() {
        let mut c = cfg(0.5, 0.5, 100);
        assert!(matches!(verify(&c), Err(CliError::Usage(_))));
        c.tests = vec!["bogus".into()];
        assert!(matches!(verify(&c), Err(CliError::Usage(_))));
    }
}
