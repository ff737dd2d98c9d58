//! `twofactor` command-line tool.
//!
//! Exit codes: 0 success, 1 output error, 2 unreadable input,
//! 3 invalid parameters or (with `--strict`) an invalid input graph.

mod args;
mod commands;
mod input;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Invalid(String),
    Output(io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Output(_) => 1,
            CliError::Input(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Invalid(m) => f.write_str(m),
            CliError::Output(e) => write!(f, "write failed: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Classify(a) => commands::classify(&a, &mut out),
        Command::Props(a) => commands::props(&a, &mut out),
        Command::Gen(a) => commands::gen(&a, &mut out),
        Command::Lift(a) => commands::lift(&a, &mut out),
        Command::Named(a) => commands::named(&a, &mut out),
        Command::Matchings(a) => commands::matchings(&a, &mut out),
    };
    let result = result.and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twofactor: {e}");
            ExitCode::from(e.code())
        }
    }
}
