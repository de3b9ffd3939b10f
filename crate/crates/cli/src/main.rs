mod args;
mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use serde_json::Value;

use args::Cli;
use error::CliError;

fn parse(argv: &[OsString]) -> Result<(Cli, clap::ArgMatches), CliError> {
    let root = Cli::command();
    let matches = match root.clone().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => e.exit(),
            _ => return Err(CliError::usage(e.to_string().trim_end())),
        },
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::usage(e.to_string().trim_end()))?;
    let Some(path) = cli.config.clone() else {
        return Ok((cli, matches));
    };
    let merged = config::merge(&path, argv.to_vec(), &root, &matches)?;
    let matches = root.try_get_matches_from(&merged).map_err(|e| CliError::usage(e.to_string().trim_end()))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::usage(e.to_string().trim_end()))?;
    Ok((cli, matches))
}

fn run() -> Result<u8, CliError> {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let (cli, _) = parse(&argv)?;
    // Threads are left out of the echoed config so output does not depend on them.
    let mut config = serde_json::to_value(&cli.command).map_err(netspace_core::NetspaceError::from)?;
    if let Value::Object(map) = &mut config {
        map.remove("command");
    }
    let threads = match cli.threads {
        Some(0) => return Err(CliError::usage("--threads must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    netspace_core::harness::with_threads(threads, || commands::execute(&cli.command, &config))?
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            e.emit();
            ExitCode::from(e.code)
        }
    }
}
