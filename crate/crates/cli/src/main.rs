//! `specmap`: forward and inverse spectral problems from the command line.

mod args;
mod commands;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SPECMAP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SPECMAP_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { CliError::Usage(String::new()).exit_code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|_| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("specmap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
