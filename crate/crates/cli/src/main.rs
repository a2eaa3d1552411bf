//! `erwlab`: simulate elephant random walks, tabulate exact and limiting
//! moments, and run the verification catalogue.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Format};
use error::CliError;

#[derive(Parser)]
#[command(name = "erwlab", version, about = "Elephant random walk laboratory")]
struct Cli {
    /// TOML config file; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Memory parameter p in [0, 1].
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Probability that the first step is +1.
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Horizon.
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Ensemble size.
    #[arg(long, global = true)]
    paths: Option<u64>,
    /// Base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated test names for `verify`.
    #[arg(long, global = true, value_delimiter = ',')]
    tests: Option<Vec<String>>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file, `-` for stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// One row per simulated path.
    Simulate,
    /// Exact moments of S_n: recursion against closed form.
    Moments {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        orders: Vec<u8>,
    },
    /// Run named checks; exit status 1 if a hard-gated check fails.
    Verify,
    /// Moments of the superdiffusive limit and the growth constant of v_n.
    Limits,
    /// Print the resolved configuration as TOML.
    ShowConfig,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let o = &cli.overrides;
    if o.p.is_some() {
        cfg.p = o.p;
    }
    if o.q.is_some() {
        cfg.q = o.q;
    }
    if let Some(n) = o.n {
        cfg.n = n;
    }
    if let Some(paths) = o.paths {
        cfg.paths = paths;
    }
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    if let Some(tests) = &o.tests {
        cfg.tests = tests.iter().filter(|t| !t.is_empty()).cloned().collect();
    }
    if let Some(format) = o.format {
        cfg.format = format;
    }
    if let Some(out) = &o.out {
        cfg.out = out.clone();
    }
    if let Some(threads) = o.threads {
        cfg.threads = threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let started = Instant::now();
    let cfg = resolve(&cli)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    }
    let (table, pass) = match &cli.command {
        Command::Simulate => (commands::simulate(&cfg)?, true),
        Command::Moments { orders } => (commands::moments(&cfg, orders)?, true),
        Command::Verify => commands::verify(&cfg)?,
        Command::Limits => (commands::limits(&cfg)?, true),
        Command::ShowConfig => {
            output::write_out(&cfg, cfg.to_toml()?.as_bytes())?;
            return Ok(true);
        }
    };
    let bytes = output::render(&cfg, &table, started)?;
    output::write_out(&cfg, &bytes)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("erwlab: error: {e}");
            e.exit_code()
        }
    }
}
