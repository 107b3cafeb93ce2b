//! `ramlab`: command-line front end to the ramification library.

mod args;
mod commands;
mod series_io;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// Failure with its exit status: 1 for domain errors, 2 for usage errors.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<ramlab::Error> for CliError {
    fn from(e: ramlab::Error) -> Self {
        use ramlab::Error::*;
        let code = match e {
            NotPrime(_) | InvalidShape(_) | Guard(_) | Reducible { .. } => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: &Cli) -> Result<commands::Output, CliError> {
    match &cli.command {
        Command::Breaks(a) => commands::breaks(a),
        Command::Profile(a) => commands::profile(a),
        Command::As(a) => commands::artin_schreier(a),
        Command::Norm(a) => commands::norm(a),
        Command::Tables(a) => commands::tables(a),
    }
}

fn fail(code: u8, message: &str) -> ExitCode {
    let line = message
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    eprintln!("ramlab: error: {}", line.trim_start_matches("error: "));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(2, &e.to_string()),
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                match serde_json::to_string_pretty(&out.json) {
                    Ok(s) => println!("{s}"),
                    Err(e) => return fail(1, &e.to_string()),
                }
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                fail(1, "a consistency check failed")
            }
        }
        Err(e) => fail(e.code, &e.message),
    }
}
