mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{parse_point, BoxArg, ObjectiveSpec, Settings};

/// Constant-step gradient descent experiments around strict saddles.
#[derive(Parser)]
#[command(name = "gdsaddle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory; writes trajectory.csv and summary.json to --out.
    Run {
        #[command(flatten)]
        common: Common,
        /// Starting point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Uniform random starts tallied by limit; writes montecarlo.json, trials.csv, basins.csv.
    Montecarlo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<usize>,
        /// `lo,hi` for every coordinate or `lo:hi,lo:hi,...`; defaults to the domain box.
        #[arg(long, allow_hyphen_values = true)]
        init_box: Option<String>,
        /// Run trials on one thread (output is identical).
        #[arg(long)]
        serial: bool,
    },
    /// Find and classify critical points by multistart Newton; prints JSON.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Number of Newton starts.
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Sample the local stable set of a 2-D strict saddle; writes stable_set.csv.
    StableSet {
        #[command(flatten)]
        common: Common,
        /// Saddle location; defaults to the objective's first known strict saddle.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        /// Grid points per axis.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Solve g(x) = y for x; prints JSON.
    Invert {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Inner solver start; defaults to y.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Fit linear and power convergence models to one trajectory; prints JSON.
    Rates {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// `name`, `name:[p1,p2,..]`, or a JSON object {name, params, domain_box}.
    #[arg(long)]
    objective: Option<String>,
    /// Override the objective's domain box (`lo,hi` or `lo:hi,...`).
    #[arg(long, allow_hyphen_values = true)]
    domain_box: Option<String>,
    /// Step size; must satisfy alpha * L < 1 on the domain box.
    #[arg(long)]
    alpha: Option<f64>,
    /// alpha = theta / L when --alpha is absent (default 0.99).
    #[arg(long)]
    theta: Option<f64>,
    /// Gradient-norm stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn settings(self, extra: Settings) -> Result<Settings> {
        let objective = self.objective.as_deref().map(ObjectiveSpec::parse_flag).transpose()?;
        let flags = Settings {
            objective,
            alpha: self.alpha,
            theta: self.theta,
            tol: self.tol,
            max_iters: self.max_iters,
            seed: self.seed,
            out: self.out,
            ..extra
        };
        let base = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let mut merged = base.overlay(flags);
        if let Some(b) = self.domain_box {
            let b = BoxArg::parse(&b)?;
            // the cube form takes its dimension from the objective's own box
            merged.domain_box = None;
            merged.domain_box = Some(b.resolve(merged.objective()?.dimension()));
        }
        Ok(merged)
    }
}

fn point(s: Option<String>) -> Result<Option<Vec<f64>>> {
    s.as_deref().map(parse_point).transpose()
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, x0 } => {
            let s = common.settings(Settings { x0: point(x0)?, ..Settings::default() })?;
            commands::run(&s)
        }
        Command::Montecarlo { common, trials, init_box, serial } => {
            let init_box = init_box.as_deref().map(BoxArg::parse).transpose()?;
            let mut s = common.settings(Settings {
                trials,
                serial: serial.then_some(true),
                ..Settings::default()
            })?;
            if let Some(b) = init_box {
                s.init_box = Some(b.resolve(s.objective()?.dimension()));
            }
            commands::montecarlo(&s)
        }
        Command::Classify { common, seeds } => {
            let s = common.settings(Settings { seeds, ..Settings::default() })?;
            commands::classify(&s)
        }
        Command::StableSet { common, x0, radius, grid } => {
            let s = common.settings(Settings { x0: point(x0)?, radius, grid, ..Settings::default() })?;
            commands::stable_set(&s)
        }
        Command::Invert { common, y, x0 } => {
            let s = common.settings(Settings { y: point(y)?, x0: point(x0)?, ..Settings::default() })?;
            commands::invert(&s)
        }
        Command::Rates { common, x0 } => {
            let s = common.settings(Settings { x0: point(x0)?, ..Settings::default() })?;
            commands::rates(&s)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
