use std::process::ExitCode;

use clap::Parser;
use pwtrace::cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = pwtrace::configure_threads() {
        eprintln!("pwtrace: {msg}");
        return ExitCode::from(1);
    }
    match pwtrace::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pwtrace: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
