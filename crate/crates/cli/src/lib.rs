//! Command-line front end for `quadmap`: orbits, preimages, chaos witnesses,
//! probes, curves and a self-check, written as CSV, JSON or SVG.
//!
//! Exit codes: 0 on success, 1 when a numeric invariant fails, 2 on usage errors.

mod args;
mod commands;
mod output;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command};
pub use output::{Report, RunConfig, Tolerances, VerdictRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

macro_rules! numeric_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invariant(e.to_string())
            }
        }
    )*};
}

numeric_errors!(
    quadmap::GeometryError,
    quadmap::DynamicsError,
    quadmap::chaos::ChaosError,
    quadmap::curves::CurveError
);

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => 2,
            };
        }
    };
    let result = match &cli.command {
        Command::Iterate(a) => commands::iterate_cmd(a, stdout),
        Command::Preimage(a) => commands::preimage_cmd(a, stdout),
        Command::Sensitivity(a) => commands::sensitivity_cmd(a, stdout),
        Command::Accessibility(a) => commands::accessibility_cmd(a, stdout),
        Command::Transitivity(a) => commands::transitivity_cmd(a, stdout),
        Command::Periodic(a) => commands::periodic_cmd(a, stdout),
        Command::Lyapunov(a) => commands::lyapunov_cmd(a, stdout),
        Command::Mixing(a) => commands::mixing_cmd(a, stdout),
        Command::SliceCert(a) => commands::slice_cert_cmd(a, stdout),
        Command::Curves(a) => commands::curves_cmd(a, stdout),
        Command::Verify(a) => verify::verify_cmd(a, stdout),
        Command::Replay(a) => commands::replay_cmd(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
