use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use godunov_cli::commands::{cmd_convergence, cmd_riemann, cmd_run};
use godunov_cli::{CliError, RunConfig};

/// Godunov finite volume solver for the 2D Euler equations.
///
/// Exit status: 0 success, 2 configuration error, 3 non-physical state,
/// 4 vacuum in a Riemann problem, 5 fewer than two mesh levels, 1 other.
/// GODUNOV_OUTPUT_DIR overrides the output directory of a config.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark described by a TOML config.
    Run { config: PathBuf },
    /// Solve one Riemann problem and sample it at the given x/t.
    Riemann {
        /// Left state as rho,u,p.
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        left: [f64; 3],
        /// Right state as rho,u,p.
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        right: [f64; 3],
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        /// Comma separated sample points x/t.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Vec<f64>,
    },
    /// Run every level of the [convergence] section and write error tables.
    Convergence { config: PathBuf },
}

fn parse_state(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|p| format!("expected rho,u,p, got {} values", p.len()))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => cmd_run(&RunConfig::load(&config)?),
        Command::Convergence { config } => cmd_convergence(&RunConfig::load(&config)?),
        Command::Riemann {
            left,
            right,
            gamma,
            xi,
        } => cmd_riemann(left, right, gamma, &xi, &mut std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
