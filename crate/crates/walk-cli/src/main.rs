//! `walk`: command-line front end for the quantum walk simulator.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 failed invariant
//! self-check.

use std::process::ExitCode;

use walk_cli::{config, run, CliError};

fn main() -> ExitCode {
    let result =
        config::parse_args(std::env::args_os()).and_then(|config| run::execute(&config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(message)) => {
            // clap-rendered messages already carry the "error:" prefix.
            if message.trim_start().starts_with("error") {
                eprintln!("{}", message.trim_end());
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Io { path, source }) => {
            eprintln!("error: {}: {source}", path.display());
            ExitCode::from(2)
        }
        Err(CliError::SelfCheck(message)) => {
            eprintln!("error: invariant self-check failed: {message}");
            ExitCode::from(3)
        }
    }
}
