mod commands;
mod config;
mod report;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use hecke_core::Error;

use config::{Cli, Format};
use report::ReportDocument;

#[derive(Debug)]
pub enum CliError {
    /// Exit 1.
    Failure(String),
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    MissingData(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::MissingData(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Failure(m) | CliError::Usage(m) | CliError::MissingData(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::MissingModularPolynomial(_) => CliError::MissingData(e.to_string()),
            Error::MassFormula { .. } | Error::RootOutsideLocus(_) | Error::SymmetrizationResidual(_) => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (common, command) = config::resolve(cli)?;
    let outcome = commands::run(&common, &command)?;
    let passed = outcome.summary.passed;
    let text = match common.format.unwrap_or_default() {
        Format::Csv => outcome.csv,
        Format::Json => {
            let doc = ReportDocument::new(command.name(), outcome.config, outcome.payload, outcome.summary);
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
    };
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hecke: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hecke: {e}");
            ExitCode::from(e.code())
        }
    }
}
