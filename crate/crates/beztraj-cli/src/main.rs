//! `beztraj`: config-driven pipeline for constrained feedforward
//! trajectory design over differentially flat systems.
//!
//! Commands: `compile` (constraint system from a config), `region`
//! (certified inner/outer box approximation), `check` (exact membership of
//! a parameter point), `simulate` (RK4 tracking run with limit audit), and
//! `envelope` (control-polygon envelope export).
//!
//! Exit codes: 0 success (including "region is empty" and non-strict audit
//! violations), 1 infeasible point or strict-mode violation, 2 usage or
//! configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use beztraj_cli::{commands, CliError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beztraj",
    about = "Constrained feedforward trajectory design over Bezier control points",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a project config into a constraint-system file.
    Compile {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Branch-and-prune region approximation of a compiled system.
    Region {
        #[arg(long)]
        system: PathBuf,
        /// Bisection stops when a box side drops below this width.
        #[arg(long)]
        min_width: Option<f64>,
        /// Maximum number of boxes classified.
        #[arg(long)]
        budget: Option<usize>,
        /// Attach a seeded Monte-Carlo cross-check to the statistics.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Exact membership check of a parameter point.
    Check {
        #[arg(long)]
        system: PathBuf,
        /// Comma-separated values in free-parameter order.
        #[arg(long)]
        point: String,
    },
    /// Simulate a chosen trajectory and audit its limits.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Free control-point values, comma-separated (template order).
        #[arg(long)]
        point: Option<String>,
        /// Exit nonzero when the audit reports violations.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Export the control-polygon envelope of the configured curve.
    Envelope {
        #[arg(long)]
        config: PathBuf,
        /// Free control-point values, comma-separated (template order).
        #[arg(long)]
        point: Option<String>,
        /// Refine by degree elevation until the distance bound reaches
        /// this gap.
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Compile { config, out_dir } => {
            commands::cmd_compile(&config, &commands::default_out_dir(out_dir))
        }
        Command::Region {
            system,
            min_width,
            budget,
            seed,
            out_dir,
        } => commands::cmd_region(
            &system,
            min_width,
            budget,
            seed,
            &commands::default_out_dir(out_dir),
        ),
        Command::Check { system, point } => commands::cmd_check(&system, &point),
        Command::Simulate {
            config,
            point,
            strict,
            out_dir,
        } => commands::cmd_simulate(
            &config,
            point.as_deref(),
            strict,
            &commands::default_out_dir(out_dir),
        ),
        Command::Envelope {
            config,
            point,
            gap,
            out_dir,
        } => commands::cmd_envelope(
            &config,
            point.as_deref(),
            gap,
            &commands::default_out_dir(out_dir),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
