//! Command line front end of `godunov-core`: TOML run configuration, the
//! `run`, `riemann` and `convergence` commands, and the CSV/TOML output files.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::RunConfig;
pub use error::{CliError, Result};
