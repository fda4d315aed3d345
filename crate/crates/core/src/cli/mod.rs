//! Experiment drivers behind the `dirac-delay` binary, and the CSV and JSON
//! formats they read and write.
//!
//! Exit codes: 0 success, 1 failed check or numerical failure, 2 bad input
//! or configuration.

pub mod args;
pub mod commands;
pub mod config;
pub mod io;
pub mod report;

use std::path::PathBuf;

pub use args::{Cli, Command, Flags};
pub use commands::{cmd_forward, cmd_invert, cmd_oracle_check, cmd_roundtrip, cmd_spectra};
pub use config::{ExperimentConfig, Overrides, PotentialSource};
pub use report::RunReport;

use crate::error::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}, line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Numerics(#[from] Error),
}

fn is_input(e: &Error) -> bool {
    match e {
        Error::Domain(_) | Error::Range(_) | Error::Input(_) => true,
        Error::Stage { source, .. } => is_input(source),
        _ => false,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerics(e) if !is_input(e) => 1,
            _ => 2,
        }
    }
}

/// Runs one subcommand and writes `<command>-report.json` next to its
/// outputs. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = ExperimentConfig::resolve(cli.flags.config.as_deref(), &cli.flags.overrides())
        .and_then(|cfg| {
            let report = match cli.command {
                Command::Forward => cmd_forward(&cfg),
                Command::Spectra => cmd_spectra(&cfg),
                Command::Invert => cmd_invert(&cfg),
                Command::Roundtrip => cmd_roundtrip(&cfg),
                Command::OracleCheck => cmd_oracle_check(&cfg),
            }?;
            let path = cfg.out.join(format!("{}-report.json", report.command));
            report.write(&path)?;
            Ok((report, path))
        });
    match outcome {
        Ok((report, path)) => {
            for note in &report.notes {
                println!("{note}");
            }
            for c in &report.checks {
                println!(
                    "{} {}: {:.3e} (tolerance {:.1e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tolerance
                );
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            println!("wrote {}", path.display());
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
