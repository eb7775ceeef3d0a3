mod cli;
mod commands;
mod error;
mod input;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use crate::cli::Cli;
use crate::error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PPERSIST_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::validation(format!("PPERSIST_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Internal(e.to_string()))
}

fn write_file(path: &std::path::Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let artifacts = commands::run(&cli.command, cli.field)?;
    for (path, contents) in &artifacts.files {
        write_file(path, contents)?;
    }
    match &cli.out {
        Some(path) => write_file(path, &artifacts.json),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(artifacts.json.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message = text.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("{}", json!({ "error": "validation", "message": message }));
            return ExitCode::from(1);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
