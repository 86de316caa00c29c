//! File formats and subcommands of the `pwtrace` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;

use cli::Command;
use error::CliResult;

pub fn run(command: &Command) -> CliResult<()> {
    match command {
        Command::Partition(a) => commands::partition(a),
        Command::Check(a) => commands::check(a),
        Command::Norm(a) => commands::norm(a),
        Command::Profile(a) => commands::profile(a),
        Command::Interpolate(a) => commands::interpolate(a),
    }
}

/// Sizes the global rayon pool from `PWTRACE_THREADS`, if set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("PWTRACE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("PWTRACE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("PWTRACE_THREADS must be a positive integer, got 0".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
