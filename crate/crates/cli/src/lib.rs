//! Config-driven front end for `symdecon`: evaluates deconvolution curves,
//! estimates them from samples, cross-checks against the lattice oracle and
//! writes CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{Defaults, Overrides, RunConfig};
pub use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "symdecon", version, about = "Deconvolution of distribution functions from contaminated observations")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file; overrides `output_path`. Standard output when neither is set.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Comma-separated orders; overrides `m`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,

    /// Seed for simulated samples; overrides `simulate.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Print every numeric default as JSON and exit.
    #[arg(long)]
    pub show_defaults: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Deconvolution function for analytic target and error laws.
    Eval,
    /// Smoothed deconvolution density for analytic laws.
    Density,
    /// Empirical estimate from a sample.
    Estimate,
    /// Fourier path against the lattice oracle and structural identities.
    Validate,
    /// Direct inversion formulas for one law.
    Invert,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    if cli.show_defaults {
        let text = serde_json::to_string_pretty(&Defaults::default()).expect("defaults serialize");
        println!("{text}");
        return Ok(());
    }
    let command = cli.command.ok_or_else(|| CliError::Config("no subcommand given; see --help".into()))?;
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let overrides = Overrides { output: cli.output.clone(), m: cli.m.clone(), seed: cli.seed };
    let cfg = RunConfig::load(path, &overrides)?;
    let out = cfg.output_path.as_deref();
    match command {
        Command::Eval => commands::eval(&cfg)?.emit(out),
        Command::Density => commands::density(&cfg)?.emit(out),
        Command::Estimate => commands::estimate(&cfg)?.emit(out),
        Command::Invert => commands::invert(&cfg)?.emit(out),
        Command::Validate => {
            let checks = commands::validate(&cfg)?;
            match out {
                Some(p) => {
                    let f = std::fs::File::create(p)
                        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", p.display())))?;
                    commands::write_report(&checks, std::io::BufWriter::new(f))?;
                }
                None => commands::write_report(&checks, std::io::stdout().lock())?,
            }
            match checks.iter().filter(|c| !c.passed()).count() {
                0 => Ok(()),
                n => Err(CliError::Validation(n)),
            }
        }
    }
}
