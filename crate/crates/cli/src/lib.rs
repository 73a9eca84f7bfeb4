//! Command-line front end: parameter sweeps and the data behind the
//! COP-at-maximum-figure-of-merit and critical-driving-time figures.
//!
//! [`run`] does everything except process exit, so tests drive the CLI
//! in-process.

pub mod commands;
pub mod params;
pub mod table;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use params::{Cli, Command, Common, Layers};
use table::{write_atomic, Table};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for invalid input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<otto_core::Error> for CliError {
    fn from(e: otto_core::Error) -> Self {
        use otto_core::Error as E;
        match e {
            E::Domain(_) | E::KindMismatch { .. } | E::Table(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::Invalid("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Io(format!("thread pool: {e}"))),
    }
}

fn emit(common: &Common, table: &Table, stdout: &mut dyn Write) -> Result<(), CliError> {
    let csv = table.to_csv();
    match &common.out {
        Some(path) => write_atomic(path, &csv),
        None => stdout
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn jobs(common: &Common) -> Result<Option<usize>, CliError> {
    Layers::new(common)?.jobs()
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing CSV or report text to `stdout` unless `--out` redirects it.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Invalid(e.to_string()))?;
    match &cli.command {
        Command::CopSweep(a) => {
            let table = with_jobs(jobs(&a.common)?, || commands::cop_sweep(a))??;
            emit(&a.common, &table, stdout)
        }
        Command::CriticalTime(c) => {
            let layers = Layers::new(c)?;
            let table = with_jobs(layers.jobs()?, || commands::critical_time(&layers))??;
            emit(c, &table, stdout)
        }
        Command::Qstar(c) => {
            let layers = Layers::new(c)?;
            let table = with_jobs(layers.jobs()?, || commands::qstar_table(&layers))??;
            emit(c, &table, stdout)
        }
        Command::Report(a) => {
            let report = commands::report(a)?;
            if let Some(path) = &a.common.out {
                write_atomic(path, &report.table.to_csv())?;
            }
            stdout
                .write_all(report.text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
