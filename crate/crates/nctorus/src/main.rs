use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nctorus::experiments::{
    all_passed, run_factorization_check, run_potential_decay, run_property_suite_with,
    run_schwartz_bound, run_theorem_scan, Check, CocycleFault,
};
use nctorus::io::read_theta;
use nctorus::output::Render;
use nctorus::{ExperimentConfig, OutputFormat};

/// Numerical experiments on quantum tori at finite Fourier truncation.
#[derive(Parser)]
#[command(name = "nctorus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every invariant check on random data.
    Suite {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt_cocycle: bool,
    },
    /// Truncated Schatten norms of random kernels across box radii.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Singular-value decay of the Bessel potential.
    Decay {
        #[command(flatten)]
        common: Common,
        /// Order of the potential J^{-alpha}.
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Factorization and adjoint identities as dense matrices.
    Factor {
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient bounds for smooth kernels.
    Schwartz {
        #[command(flatten)]
        common: Common,
        /// Summability order; must exceed d. Defaults to d + 1.
        #[arg(long)]
        s0: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON document {"d": .., "theta": [[..], ..]} replacing the configured theta.
    #[arg(long)]
    theta_file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Comma-separated box radii.
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<u32>>,
    /// Comma-separated Schatten exponents.
    #[arg(long, value_delimiter = ',')]
    r_grid: Option<Vec<f64>>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    s_margin: Option<f64>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(path) = &self.theta_file {
            let theta = read_theta(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.set_theta(&theta);
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = &self.n_grid {
            cfg.n_grid = v.clone();
        }
        if let Some(v) = &self.r_grid {
            cfg.r_grid = v.clone();
        }
        if let Some(v) = self.alpha1 {
            cfg.alpha1 = v;
        }
        if let Some(v) = self.alpha2 {
            cfg.alpha2 = v;
        }
        if let Some(v) = self.s_margin {
            cfg.s_margin = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(cfg: &ExperimentConfig, report: &impl Render) -> Result<()> {
    let text = report.render(cfg.format)?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn summarize(checks: &[Check]) -> bool {
    for c in checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        eprintln!(
            "{mark} {:<28} max_error={:.3e} tolerance={:.3e}",
            c.name, c.max_error, c.tolerance
        );
    }
    all_passed(checks)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Suite {
            common,
            corrupt_cocycle,
        } => {
            let cfg = common.config()?;
            let fault = if corrupt_cocycle {
                CocycleFault::SignFlip
            } else {
                CocycleFault::None
            };
            let report = run_property_suite_with(cfg.seed, &cfg.theta_matrix()?, fault)?;
            emit(&cfg, &report)?;
            Ok(summarize(&report.checks))
        }
        Command::Scan { common } => {
            let cfg = common.config()?;
            let report = run_theorem_scan(&cfg)?;
            emit(&cfg, &report)?;
            for s in &report.stabilization {
                eprintln!(
                    "r={:.6} ({:?}) N {}->{}: relative change {:.3e}{}",
                    s.r,
                    s.regime,
                    s.n_from,
                    s.n_to,
                    s.relative_change,
                    if s.stable { ", stabilized" } else { "" }
                );
            }
            Ok(summarize(&report.checks))
        }
        Command::Decay { common, alpha } => {
            let mut cfg = common.config()?;
            if common.config.is_none() && common.n_grid.is_none() {
                cfg.n_grid = vec![10, 20, 40];
            }
            let report = run_potential_decay(cfg.d, alpha, &cfg.n_grid)?;
            emit(&cfg, &report)?;
            Ok(summarize(&report.checks))
        }
        Command::Factor { common } => {
            let cfg = common.config()?;
            let report = run_factorization_check(&cfg)?;
            emit(&cfg, &report)?;
            Ok(summarize(&report.checks))
        }
        Command::Schwartz { common, s0 } => {
            let cfg = common.config()?;
            let report = run_schwartz_bound(&cfg, s0)?;
            emit(&cfg, &report)?;
            Ok(summarize(&report.checks))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
