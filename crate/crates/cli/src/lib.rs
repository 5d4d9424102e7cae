//! Command-line front end for the gaussid toolkit.
//!
//! Four subcommands cover the full workflow: `simulate` generates noisy
//! observations from a chosen truth system, `fit` estimates model
//! parameters (Bayesian filtering-based posterior or one of the
//! least-squares baselines), `predict` rolls posterior draws forward into
//! an ensemble forecast, and `suite` runs the batch experiments. Every run
//! is driven by a single TOML config plus a handful of flags, and leaves a
//! manifest behind that is sufficient to reproduce it bit for bit.

pub mod commands;
pub mod config;
pub mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FitMethod, RunContext, SuiteKind};

#[derive(Debug, Parser)]
#[command(name = "gaussid", version, about = "Bayesian system identification with Gaussian filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a truth system and write noisy observations.
    Simulate(CommonArgs),
    /// Fit model parameters to an observation file.
    Fit {
        #[command(flatten)]
        common: CommonArgs,
        /// bayes, dmd, tdmd or sindy
        #[arg(long)]
        method: String,
    },
    /// Roll posterior draws forward into an ensemble forecast.
    Predict(CommonArgs),
    /// Run a batch experiment: landscape, sweep, flops or scaling.
    Suite {
        #[command(flatten)]
        common: CommonArgs,
        /// landscape, sweep, flops or scaling
        name: String,
        /// Use the full-scale realization count from the config.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Parser)]
pub struct CommonArgs {
    /// TOML config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; input paths in the config resolve against it.
    #[arg(long)]
    pub out: PathBuf,
    /// Replace the active command's seed from the config.
    #[arg(long)]
    pub seed_override: Option<u64>,
    /// Overwrite existing output files.
    #[arg(long)]
    pub force: bool,
}

impl CommonArgs {
    fn context(&self, config_echo: String, full: bool) -> RunContext {
        RunContext {
            out_dir: self.out.clone(),
            config_echo,
            seed_override: self.seed_override,
            force: self.force,
            full,
        }
    }
}

/// Run a parsed command line. Returns the list of files written.
pub fn run(cli: &Cli) -> gaussid_core::Result<Vec<PathBuf>> {
    let common = match &cli.command {
        Command::Simulate(c) | Command::Predict(c) => c,
        Command::Fit { common, .. } | Command::Suite { common, .. } => common,
    };
    let (cfg, echo) = config::load_config(&common.config)?;
    match &cli.command {
        Command::Simulate(c) => commands::cmd_simulate(&cfg, &c.context(echo, false)),
        Command::Fit { common, method } => {
            let method = FitMethod::parse(method)?;
            commands::cmd_fit(&cfg, &common.context(echo, false), method)
        }
        Command::Predict(c) => commands::cmd_predict(&cfg, &c.context(echo, false)),
        Command::Suite { common, name, full } => {
            let kind = SuiteKind::parse(name)?;
            commands::cmd_suite(&cfg, &common.context(echo, *full), kind)
        }
    }
}

pub fn main_impl() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
