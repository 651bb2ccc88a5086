//! `bubble`: command-line entry points for the weighted double bubble kernels.
//!
//! Exit codes: 0 success, 2 input error, 3 class mismatch, 4 numerical
//! failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use bubble_core::perturb::PerturbationKind;
use clap::{Parser, Subcommand};

use commands::{GaussOpts, InstanceArgs, PerturbOpts, RelareaOpts, StandardOpts};
use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "bubble", version, about = "Weighted double bubbles in ℝⁿ")]
struct Cli {
    /// Flat key=value run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct the standard bubble and print its measurements.
    Standard {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Write the generating network JSON here.
        #[arg(long)]
        network: Option<PathBuf>,
        /// Write the full geometry JSON here.
        #[arg(long)]
        geometry: Option<PathBuf>,
    },
    /// Export one competitor of a perturbation family as a network file.
    Perturb {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_parser = parse_family)]
        family: PerturbationKind,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Leave the competitor's volumes as perturbed.
        #[arg(long)]
        no_restore: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative area of a competitor network against the standard bubble.
    Relarea {
        file: PathBuf,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Score in the class of the network's own volumes.
        #[arg(long)]
        own_class: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perturbation sweep over the configured grid, as CSV.
    Sweep {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gauss-image audit of a network plus the monotonicity grids.
    Gauss {
        file: PathBuf,
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        own_class: bool,
        /// Audit under the hypothesis that every ratio equals this μ₀.
        #[arg(long)]
        assume: Option<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Symmetrization certificate for a planar region.
    Symmetrize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_family(s: &str) -> Result<PerturbationKind, String> {
    s.parse().map_err(|e: bubble_core::Error| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Standard { instance, network, geometry } => {
            commands::standard(&cfg, &StandardOpts { instance, network, geometry })
        }
        Command::Perturb { instance, family, epsilon, index, no_restore, out } => {
            commands::perturb(&cfg, &PerturbOpts { instance, family, epsilon, index, no_restore, out })
        }
        Command::Relarea { file, instance, own_class, out } => {
            commands::relarea(&cfg, &RelareaOpts { file, instance, own_class, out })
        }
        Command::Sweep { out } => commands::sweep_cmd(&cfg, out.as_deref()),
        Command::Gauss { file, instance, own_class, assume, out_dir } => {
            commands::gauss(&cfg, &GaussOpts { file, instance, own_class, assume, out_dir })
        }
        Command::Symmetrize { file, out } => commands::symmetrize(&cfg, &file, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
