//! Configuration-driven command line for photon wave mechanics.
//!
//! Exit codes: 0 all checks passed, 1 a numeric check failed, 2 usage or
//! configuration error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "photonwm",
    about = "Photon wave mechanics on discrete wave-vector grids",
    version
)]
struct Cli {
    /// JSON scenario configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing)
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Rayon thread count (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Override the seed of seeded random test fields
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvector, commutator, similarity and adjoint checks of r̂^(α)
    OperatorCheck,
    /// Synthesize a localized state and its vortex diagnostic
    Localized,
    /// Advance a state's mode coefficients in time
    Evolve,
    /// Number and current densities with continuity diagnostics
    Density,
    /// Momentum and angular-momentum functionals
    Functionals,
    /// Two-photon synthesis, exchange symmetry and marginals
    TwoPhoton,
    /// Radial angular-momentum budget of a paraxial beam
    BeamAm,
    /// Photodetection-rate vs number-density comparison
    Glauber,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::OperatorCheck => "operator-check",
            Command::Localized => "localized",
            Command::Evolve => "evolve",
            Command::Density => "density",
            Command::Functionals => "functionals",
            Command::TwoPhoton => "two-photon",
            Command::BeamAm => "beam-am",
            Command::Glauber => "glauber",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if cli.threads > 0 {
        // ignore the error if a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("--config PATH is required"))?;
    let (cfg, hash) = commands::read_config(config_path)?;
    std::fs::create_dir_all(&cli.out)?;
    match cli.command {
        Command::OperatorCheck => {
            commands::cmd_operator_check(&cfg, &hash, &cli.out, cli.seed)
        }
        Command::Localized => commands::cmd_localized(&cfg, &hash, &cli.out),
        Command::Evolve => commands::cmd_evolve(&cfg, &hash, &cli.out),
        Command::Density => commands::cmd_density(&cfg, &hash, &cli.out),
        Command::Functionals => commands::cmd_functionals(&cfg, &hash, &cli.out),
        Command::TwoPhoton => commands::cmd_two_photon(&cfg, &hash, &cli.out),
        Command::BeamAm => commands::cmd_beam_am(&cfg, &hash, &cli.out),
        Command::Glauber => commands::cmd_glauber(&cfg, &hash, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => {
            println!("{}: all checks passed", cli.command.name());
            ExitCode::SUCCESS
        }
        Ok(false) => {
            eprintln!("{}: check failure (see reports)", cli.command.name());
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("{}: configuration error: {err:#}", cli.command.name());
            ExitCode::from(2)
        }
    }
}
